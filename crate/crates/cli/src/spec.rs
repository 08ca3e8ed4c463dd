//! The structure-spec file format.
//!
//! A spec is a TOML document. Every algebraic value is a string in the
//! polynomial grammar of `courant_core` (`"x1*x2 - 3/2"`), or a nested array
//! of such strings. Frame indices in `entries`/`symbols` tables are 1-based.
//!
//! ```toml
//! name = "ex-a"
//!
//! [patch]
//! coords = ["x1", "x2"]
//!
//! [bundle.E]
//! frame = ["e"]
//!
//! [dorfman.D]
//! bundle = "E"
//! kind = "standard"
//! christoffel = [["0"], ["x1"]]
//!
//! [checks]
//! run = ["dorfman-axioms", "splitting-theorems"]
//! ```
//!
//! Sections:
//!
//! * `[patch]`: `coords`, the coordinate names of the base patch (may be empty
//!   for a point).
//! * `[bundle.<name>]`: `frame`, the names of the local frame.
//! * `[anchor.<name>]`: `bundle` and `matrix`, the anchor as `dim × rank` rows.
//! * `[bracket.<name>]`: `bundle`, `kind` (`lie` or `courant`), `entries` as
//!   `{ i, j, value }` frame brackets `[e_i, e_j] = value`. For `lie` the table
//!   is extended skew-symmetrically; for `courant` every listed ordered pair is
//!   taken literally and `pairing` gives the constant symmetric pairing. A
//!   Courant bracket may name a Dirac subbundle (`dirac`) or claim to present
//!   the Manin pair of a Dirac triple (`presents`). An anchor and a bracket
//!   with the same name form one algebroid; either may be omitted.
//! * `[dorfman.<name>]`: a Dorfman connection on `TM⊕E* × E⊕T*M` for
//!   `E = bundle`, built according to `kind`:
//!   `standard` (`christoffel`), `im-form` (`christoffel`, `sigma`),
//!   `symbols` (sparse `symbols` table `{ i, j, value }` for `Δ_{q_i} b_j`),
//!   `dull` (`dull` names a bracket on `TM⊕E*`), `trivial` (`q` names an
//!   algebroid acting on `bundle` through `symbols` with zero pairing) or
//!   `bott` (`courant` and its isotropic subalgebroid `isotropic`).
//!   `perturb` overrides single symbols afterwards. `algebroid` declares
//!   `E = A` for a Lie algebroid `A`; `u` and `k` name the subbundles of a
//!   Dirac triple.
//! * `[subbundle.<name>]`: `dim` (ambient rank) and `frame`, constant rows.
//! * `[checks]`: `run`, the default check list, and `expect` (`pass` or
//!   `fail`) used by `verify-all`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{location}: {message}")]
    Invalid { location: String, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl SpecError {
    pub fn invalid(location: impl Into<String>, message: impl Into<String>) -> SpecError {
        SpecError::Invalid { location: location.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureSpec {
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub patch: PatchSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bundle: BTreeMap<String, BundleSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub anchor: BTreeMap<String, AnchorSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bracket: BTreeMap<String, BracketSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub dorfman: BTreeMap<String, DorfmanSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub subbundle: BTreeMap<String, SubbundleSpec>,
    #[serde(default)]
    pub checks: ChecksSpec,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchSpec {
    #[serde(default)]
    pub coords: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub frame: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorSpec {
    pub bundle: String,
    pub matrix: Vec<Vec<String>>,
}

/// One entry of a sparse table, 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub i: usize,
    pub j: usize,
    pub value: Vec<String>,
}

impl Entry {
    pub fn new<S: AsRef<str>>(i: usize, j: usize, value: &[S]) -> Entry {
        Entry { i, j, value: value.iter().map(|s| s.as_ref().to_string()).collect() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BracketKind {
    #[default]
    Lie,
    Courant,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    pub bundle: String,
    #[serde(default)]
    pub kind: BracketKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairing: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dirac: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presents: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DorfmanKind {
    #[default]
    Standard,
    ImForm,
    Symbols,
    Dull,
    Trivial,
    Bott,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DorfmanSpec {
    pub bundle: String,
    #[serde(default)]
    pub kind: DorfmanKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub christoffel: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sigma: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dull: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub courant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isotropic: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebroid: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub symbols: Vec<Entry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub perturb: Vec<Entry>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubbundleSpec {
    pub dim: usize,
    #[serde(default)]
    pub frame: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expect {
    #[default]
    Pass,
    Fail,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksSpec {
    #[serde(default)]
    pub run: Vec<String>,
    #[serde(default)]
    pub expect: Expect,
}

/// 1-based line and column of a byte offset.
pub fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Position of the first occurrence of a quoted string value, for errors
/// raised after deserialization.
pub fn locate_value(text: &str, value: &str) -> Option<(usize, usize)> {
    let needle = format!("\"{value}\"");
    text.find(&needle).map(|at| line_column(text, at + 1))
}

pub fn parse_spec_str(text: &str) -> Result<StructureSpec, SpecError> {
    toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_column(text, s.start));
        SpecError::Syntax { line, column, message: e.message().to_string() }
    })
}

pub fn parse_spec(path: &std::path::Path) -> Result<StructureSpec, SpecError> {
    let text = std::fs::read_to_string(path).map_err(|e| SpecError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_spec_str(&text)
}

/// Renders a spec as TOML with a one-line header comment.
pub fn to_toml(spec: &StructureSpec) -> String {
    let body = toml::to_string(spec).expect("structure specs always serialize");
    format!("# courant-lab structure spec: {}\n{body}", spec.name)
}
