//! Turning a [`StructureSpec`] into `courant_core` objects.

use std::collections::BTreeMap;

use courant_core::algebroid::AnchoredBracket;
use courant_core::bundle::subspace::{RMat, Subspace};
use courant_core::courant::CourantData;
use courant_core::dirac::VBTriple;
use courant_core::dorfman::bott::BottDorfman;
use courant_core::dorfman::{im_form_dorfman, standard_dorfman, trivial_dorfman, Christoffel, DorfmanConnection, PreDual};
use courant_core::{Mat, Poly, Rational, Ring, Section};

use crate::spec::{locate_value, BracketKind, DorfmanKind, DorfmanSpec, Entry, SpecError, StructureSpec};

#[derive(Debug, Clone)]
pub struct CourantDecl {
    pub data: CourantData,
    pub dirac: Option<(String, Subspace)>,
    pub presents: Option<String>,
}

#[derive(Debug, Clone)]
pub struct DorfmanDecl {
    pub kind: DorfmanKind,
    pub delta: DorfmanConnection,
    pub nabla: Option<Christoffel>,
    pub sigma: Option<Mat>,
    /// Name of the Lie algebroid `A` with `E = A`.
    pub algebroid: Option<String>,
    pub triple: Option<VBTriple>,
    pub bott: Option<BottDorfman>,
}

/// Every structure declared by one spec, keyed by its declared name.
#[derive(Debug, Clone)]
pub struct Model {
    pub name: String,
    pub ring: Ring,
    pub algebroids: BTreeMap<String, AnchoredBracket>,
    pub courants: BTreeMap<String, CourantDecl>,
    pub dorfmans: BTreeMap<String, DorfmanDecl>,
}

struct Builder<'a> {
    spec: &'a StructureSpec,
    source: Option<&'a str>,
    ring: Ring,
    ranks: BTreeMap<String, usize>,
}

impl Model {
    /// `source` is the original text, used to attach line/column positions to
    /// errors in polynomial strings.
    pub fn build(spec: &StructureSpec, source: Option<&str>) -> Result<Model, SpecError> {
        let ring = Ring::new(&spec.patch.coords).map_err(|e| SpecError::invalid("[patch] coords", e.to_string()))?;
        let mut ranks = BTreeMap::new();
        for (name, b) in &spec.bundle {
            let mut seen = b.frame.clone();
            seen.sort();
            seen.dedup();
            if seen.len() != b.frame.len() {
                return Err(SpecError::invalid(format!("[bundle.{name}] frame"), "frame names must be distinct"));
            }
            ranks.insert(name.clone(), b.frame.len());
        }
        let bld = Builder { spec, source, ring: ring.clone(), ranks };
        let algebroids = bld.algebroids()?;
        let courants = bld.courants()?;
        let mut dorfmans = BTreeMap::new();
        for (name, d) in &spec.dorfman {
            dorfmans.insert(name.clone(), bld.dorfman(name, d, &algebroids, &courants)?);
        }
        for (name, c) in &courants {
            if let Some(target) = &c.presents {
                let ok = dorfmans.get(target).is_some_and(|d| d.triple.is_some() && d.algebroid.is_some());
                if !ok {
                    return Err(SpecError::invalid(
                        format!("[bracket.{name}] presents"),
                        format!("'{target}' is not a Dorfman connection with an algebroid and a (u, k) triple"),
                    ));
                }
            }
        }
        Ok(Model { name: spec.name.clone(), ring, algebroids, courants, dorfmans })
    }
}

impl Builder<'_> {
    fn at(&self, location: &str, text: &str, message: impl std::fmt::Display) -> SpecError {
        let place = match self.source.and_then(|s| locate_value(s, text)) {
            Some((line, column)) => format!("{location} (line {line}, column {column})"),
            None => location.to_string(),
        };
        SpecError::invalid(place, format!("\"{text}\": {message}"))
    }

    fn poly(&self, location: &str, text: &str) -> Result<Poly, SpecError> {
        self.ring.parse(text).map_err(|e| self.at(location, text, e))
    }

    fn section(&self, location: &str, comps: &[String], len: usize) -> Result<Section, SpecError> {
        if comps.len() != len {
            return Err(SpecError::invalid(location, format!("expected {len} components, found {}", comps.len())));
        }
        let polys = comps.iter().map(|c| self.poly(location, c)).collect::<Result<Vec<_>, _>>()?;
        Ok(Section::new(&self.ring, polys))
    }

    fn matrix(&self, location: &str, rows: &[Vec<String>], n_rows: usize, n_cols: usize) -> Result<Mat, SpecError> {
        if rows.len() != n_rows {
            return Err(SpecError::invalid(location, format!("expected {n_rows} rows, found {}", rows.len())));
        }
        let mut out = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            out.push(self.section(&format!("{location} row {}", i + 1), row, n_cols)?.into_comps());
        }
        Ok(Mat::from_rows(&self.ring, out, n_cols))
    }

    fn rational(&self, location: &str, text: &str) -> Result<Rational, SpecError> {
        self.poly(location, text)?.as_constant().ok_or_else(|| self.at(location, text, "subbundle frames must be constant"))
    }

    fn rank_of(&self, location: &str, bundle: &str) -> Result<usize, SpecError> {
        self.ranks.get(bundle).copied().ok_or_else(|| SpecError::invalid(location, format!("unknown bundle '{bundle}'")))
    }

    fn subbundle(&self, location: &str, name: &str, dim: usize) -> Result<Subspace, SpecError> {
        let Some(s) = self.spec.subbundle.get(name) else {
            return Err(SpecError::invalid(location, format!("unknown subbundle '{name}'")));
        };
        let here = format!("[subbundle.{name}]");
        if s.dim != dim {
            return Err(SpecError::invalid(here, format!("dim is {}, but it is used in a bundle of rank {dim}", s.dim)));
        }
        let mut frame: RMat = Vec::new();
        for (i, row) in s.frame.iter().enumerate() {
            if row.len() != dim {
                return Err(SpecError::invalid(&here, format!("frame row {} has {} entries, expected {dim}", i + 1, row.len())));
            }
            frame.push(row.iter().map(|t| self.rational(&here, t)).collect::<Result<_, _>>()?);
        }
        Subspace::new(dim, frame).map_err(|e| SpecError::invalid(here, e.to_string()))
    }

    /// Sparse 1-based entries into a dense `rows × cols` table of sections.
    fn table(
        &self,
        location: &str,
        entries: &[Entry],
        rows: usize,
        cols: usize,
        len: usize,
    ) -> Result<Vec<Vec<Option<Section>>>, SpecError> {
        let mut out = vec![vec![None; cols]; rows];
        for e in entries {
            if e.i == 0 || e.j == 0 || e.i > rows || e.j > cols {
                return Err(SpecError::invalid(
                    location,
                    format!("entry ({}, {}) is outside {rows}x{cols} (indices are 1-based)", e.i, e.j),
                ));
            }
            if out[e.i - 1][e.j - 1].is_some() {
                return Err(SpecError::invalid(location, format!("entry ({}, {}) is given twice", e.i, e.j)));
            }
            out[e.i - 1][e.j - 1] = Some(self.section(&format!("{location} ({}, {})", e.i, e.j), &e.value, len)?);
        }
        Ok(out)
    }

    fn dense(&self, table: Vec<Vec<Option<Section>>>, len: usize) -> Vec<Vec<Section>> {
        table.into_iter().map(|row| row.into_iter().map(|s| s.unwrap_or_else(|| Section::zero(&self.ring, len))).collect()).collect()
    }

    fn anchor_for(&self, name: &str, bundle: &str, rank: usize) -> Result<Mat, SpecError> {
        let n = self.ring.len();
        match self.spec.anchor.get(name) {
            Some(a) => {
                let loc = format!("[anchor.{name}]");
                if a.bundle != bundle {
                    return Err(SpecError::invalid(loc, format!("bundle '{}' differs from the bracket's bundle '{bundle}'", a.bundle)));
                }
                self.matrix(&format!("{loc} matrix"), &a.matrix, n, rank)
            }
            None => Ok(Mat::zero(&self.ring, n, rank)),
        }
    }

    fn algebroids(&self) -> Result<BTreeMap<String, AnchoredBracket>, SpecError> {
        let mut out = BTreeMap::new();
        let mut names: Vec<&String> = self.spec.anchor.keys().collect();
        names.extend(self.spec.bracket.iter().filter(|(_, b)| b.kind == BracketKind::Lie).map(|(k, _)| k));
        names.sort();
        names.dedup();
        for name in names {
            let bracket = self.spec.bracket.get(name);
            if bracket.is_some_and(|b| b.kind == BracketKind::Courant) {
                continue;
            }
            let bundle = match (bracket, self.spec.anchor.get(name)) {
                (Some(b), _) => b.bundle.clone(),
                (None, Some(a)) => a.bundle.clone(),
                (None, None) => unreachable!("name comes from one of the two tables"),
            };
            let loc = format!("[bracket.{name}]");
            let r = self.rank_of(&loc, &bundle)?;
            let anchor = self.anchor_for(name, &bundle, r)?;
            let mut table = vec![vec![None; r]; r];
            if let Some(b) = bracket {
                if !b.pairing.is_empty() || b.dirac.is_some() || b.presents.is_some() {
                    return Err(SpecError::invalid(&loc, "pairing, dirac and presents need kind = \"courant\""));
                }
                let given = self.table(&format!("{loc} entries"), &b.entries, r, r, r)?;
                for i in 0..r {
                    for j in 0..r {
                        let Some(v) = &given[i][j] else { continue };
                        if i == j && !v.is_zero() {
                            return Err(SpecError::invalid(&loc, format!("entry ({0}, {0}) of a skew bracket must vanish", i + 1)));
                        }
                        if let Some(w) = &given[j][i] {
                            if w != &-v {
                                return Err(SpecError::invalid(
                                    &loc,
                                    format!("entries ({}, {}) and ({}, {}) are not opposite", i + 1, j + 1, j + 1, i + 1),
                                ));
                            }
                        }
                        table[i][j] = Some(v.clone());
                        table[j][i] = Some(-v);
                    }
                }
            }
            let ab = AnchoredBracket::new(&self.ring, anchor, self.dense(table, r)).map_err(|e| SpecError::invalid(&loc, e.to_string()))?;
            out.insert(name.clone(), ab);
        }
        Ok(out)
    }

    fn courants(&self) -> Result<BTreeMap<String, CourantDecl>, SpecError> {
        let mut out = BTreeMap::new();
        for (name, b) in self.spec.bracket.iter().filter(|(_, b)| b.kind == BracketKind::Courant) {
            let loc = format!("[bracket.{name}]");
            let r = self.rank_of(&loc, &b.bundle)?;
            let anchor = self.anchor_for(name, &b.bundle, r)?;
            let pairing = self.matrix(&format!("{loc} pairing"), &b.pairing, r, r)?;
            let table = self.table(&format!("{loc} entries"), &b.entries, r, r, r)?;
            let data =
                CourantData::new(&self.ring, anchor, pairing, self.dense(table, r)).map_err(|e| SpecError::invalid(&loc, e.to_string()))?;
            let dirac = match &b.dirac {
                Some(d) => Some((d.clone(), self.subbundle(&format!("{loc} dirac"), d, r)?)),
                None => None,
            };
            out.insert(name.clone(), CourantDecl { data, dirac, presents: b.presents.clone() });
        }
        Ok(out)
    }

    fn christoffel(&self, loc: &str, d: &DorfmanSpec, r: usize) -> Result<Christoffel, SpecError> {
        let n = self.ring.len();
        if d.christoffel.is_empty() {
            return Ok(Christoffel::flat(&self.ring, r));
        }
        let m = self.matrix(&format!("{loc} christoffel"), &d.christoffel, n, r * r)?;
        let gamma = (0..n).map(|i| (0..r).map(|j| Section::new(&self.ring, m.entries[i][j * r..(j + 1) * r].to_vec())).collect()).collect();
        Ok(Christoffel::new(&self.ring, r, gamma))
    }

    fn dorfman(
        &self,
        name: &str,
        d: &DorfmanSpec,
        algebroids: &BTreeMap<String, AnchoredBracket>,
        courants: &BTreeMap<String, CourantDecl>,
    ) -> Result<DorfmanDecl, SpecError> {
        let loc = format!("[dorfman.{name}]");
        let n = self.ring.len();
        let r = self.rank_of(&loc, &d.bundle)?;
        let lookup = |key: &Option<String>, what: &str| -> Result<String, SpecError> {
            key.clone().ok_or_else(|| SpecError::invalid(&loc, format!("kind {:?} needs '{what}'", d.kind)))
        };
        let invalid = |e: &dyn std::fmt::Display| SpecError::invalid(&loc, e.to_string());
        let (mut nabla, mut sigma, mut bott) = (None, None, None);
        let delta = match d.kind {
            DorfmanKind::Standard => {
                let c = self.christoffel(&loc, d, r)?;
                let delta = standard_dorfman(&c);
                nabla = Some(c);
                delta
            }
            DorfmanKind::ImForm => {
                let c = self.christoffel(&loc, d, r)?;
                let s = self.matrix(&format!("{loc} sigma"), &d.sigma, n, r)?;
                let delta = im_form_dorfman(&c, &s);
                nabla = Some(c);
                sigma = Some(s);
                delta
            }
            DorfmanKind::Symbols => {
                let table = self.table(&format!("{loc} symbols"), &d.symbols, n + r, r + n, r + n)?;
                DorfmanConnection::from_symbols(PreDual::canonical(&self.ring, r), self.dense(table, r + n)).map_err(|e| invalid(&e))?
            }
            DorfmanKind::Dull => {
                let g = lookup(&d.dull, "dull")?;
                let bracket = algebroids.get(&g).ok_or_else(|| SpecError::invalid(&loc, format!("unknown algebroid '{g}'")))?;
                if bracket.rank() != n + r {
                    return Err(SpecError::invalid(&loc, format!("'{g}' has rank {}, TM⊕E* has rank {}", bracket.rank(), n + r)));
                }
                DorfmanConnection::from_dull(PreDual::canonical(&self.ring, r), bracket.clone()).map_err(|e| invalid(&e))?
            }
            DorfmanKind::Trivial => {
                let q = lookup(&d.q, "q")?;
                let bracket = algebroids.get(&q).ok_or_else(|| SpecError::invalid(&loc, format!("unknown algebroid '{q}'")))?;
                let table = self.table(&format!("{loc} symbols"), &d.symbols, bracket.rank(), r, r)?;
                trivial_dorfman(bracket.clone(), self.dense(table, r))
            }
            DorfmanKind::Bott => {
                let c = lookup(&d.courant, "courant")?;
                let k = lookup(&d.isotropic, "isotropic")?;
                let decl = courants.get(&c).ok_or_else(|| SpecError::invalid(&loc, format!("unknown Courant bracket '{c}'")))?;
                let sub = self.subbundle(&format!("{loc} isotropic"), &k, decl.data.rank())?;
                let bd = BottDorfman::new(&decl.data, &sub).map_err(|e| invalid(&e))?;
                let delta = bd.connection().clone();
                if delta.b_rank() != r {
                    return Err(SpecError::invalid(
                        &loc,
                        format!("the quotient has rank {}, bundle '{}' has rank {r}", delta.b_rank(), d.bundle),
                    ));
                }
                bott = Some(bd);
                delta
            }
        };
        if !matches!(d.kind, DorfmanKind::Symbols | DorfmanKind::Trivial) && !d.symbols.is_empty() {
            return Err(SpecError::invalid(&loc, "symbols are only read for kind \"symbols\" or \"trivial\""));
        }
        let mut delta = delta;
        let (qr, br) = (delta.q_rank(), delta.b_rank());
        for (i, row) in self.table(&format!("{loc} perturb"), &d.perturb, qr, br, br)?.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                if let Some(v) = v {
                    delta = delta.with_symbol(i, j, v);
                }
            }
        }
        if let Some(a) = &d.algebroid {
            let Some(ab) = algebroids.get(a) else {
                return Err(SpecError::invalid(&loc, format!("unknown algebroid '{a}'")));
            };
            let bundle = self.spec.bracket.get(a).map(|b| &b.bundle).or_else(|| self.spec.anchor.get(a).map(|x| &x.bundle));
            if bundle != Some(&d.bundle) || ab.rank() != r || delta.predual().layout() != Some((n, r)) {
                return Err(SpecError::invalid(&loc, format!("algebroid '{a}' must live on bundle '{}' with the TM⊕E* layout", d.bundle)));
            }
        }
        let triple = match (&d.u, &d.k) {
            (None, None) => None,
            (Some(u), Some(k)) => {
                let us = self.subbundle(&format!("{loc} u"), u, qr)?;
                let ks = self.subbundle(&format!("{loc} k"), k, br)?;
                Some(VBTriple::new(delta.clone(), us, ks).map_err(|e| invalid(&e))?)
            }
            _ => return Err(SpecError::invalid(&loc, "a Dirac triple needs both u and k")),
        };
        Ok(DorfmanDecl { kind: d.kind, delta, nabla, sigma, algebroid: d.algebroid.clone(), triple, bott })
    }
}
