//! Coordinate patches, trivialized bundles and their sections.
//!
//! A section is a coefficient vector over a fixed frame. Every bundle in the
//! crate is trivialized, so a section is simply a [`Section`] of the right
//! length and a bundle map is a [`Mat`] of polynomials (rows indexed by the
//! target frame, columns by the source frame).
//!
//! Layouts used throughout:
//! * `Q = TM ⊕ E*` has components `[X^1..X^n, ξ_1..ξ_r]`;
//! * `B = E ⊕ T*M` has components `[e^1..e^r, θ_1..θ_n]`.

pub mod cartan;
pub mod subspace;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symkernel::{Poly, Rational, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("bundle tag {tag:?} requires rank {base_dim}, found {rank}")]
    TagRank { tag: BundleTag, base_dim: usize, rank: usize },
    #[error("frame names must be distinct; `{0}` repeats")]
    DuplicateFrame(String),
}

/// The base of every computation: a single polynomial coordinate chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Patch {
    ring: Ring,
}

impl Patch {
    pub fn new(ring: Ring) -> Patch {
        Patch { ring }
    }

    /// Patch with coordinates `x1..xn`.
    pub fn standard(n: usize) -> Patch {
        Patch { ring: Ring::numbered("x", n) }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.ring.len()
    }
}

/// Records canonical identifications of a trivialized bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BundleTag {
    Tangent,
    Cotangent,
    Plain,
    Dual,
    /// `TM ⊕ E*`
    TangentPlusDual,
    /// `E ⊕ T*M`
    PlainPlusCotangent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    pub patch: Patch,
    pub frame: Vec<String>,
    pub tag: BundleTag,
}

impl Bundle {
    pub fn new(patch: Patch, frame: Vec<String>, tag: BundleTag) -> Result<Bundle, BundleError> {
        let n = patch.dim();
        if matches!(tag, BundleTag::Tangent | BundleTag::Cotangent) && frame.len() != n {
            return Err(BundleError::TagRank { tag, base_dim: n, rank: frame.len() });
        }
        for (i, f) in frame.iter().enumerate() {
            if frame[..i].contains(f) {
                return Err(BundleError::DuplicateFrame(f.clone()));
            }
        }
        Ok(Bundle { patch, frame, tag })
    }

    pub fn rank(&self) -> usize {
        self.frame.len()
    }

    pub fn zero(&self) -> Section {
        Section::zero(self.patch.ring(), self.rank())
    }

    pub fn frame_section(&self, i: usize) -> Section {
        Section::unit(self.patch.ring(), self.rank(), i)
    }

    /// `TM ⊕ E*` for a plain bundle with the given frame names.
    pub fn tangent_plus_dual(patch: &Patch, e_frame: &[String]) -> Bundle {
        let mut frame: Vec<String> = patch.ring().names().iter().map(|x| format!("d/d{x}")).collect();
        frame.extend(e_frame.iter().map(|e| format!("{e}*")));
        Bundle { patch: patch.clone(), frame, tag: BundleTag::TangentPlusDual }
    }

    /// `E ⊕ T*M` for a plain bundle with the given frame names.
    pub fn plain_plus_cotangent(patch: &Patch, e_frame: &[String]) -> Bundle {
        let mut frame: Vec<String> = e_frame.to_vec();
        frame.extend(patch.ring().names().iter().map(|x| format!("d{x}")));
        Bundle { patch: patch.clone(), frame, tag: BundleTag::PlainPlusCotangent }
    }
}

/// Coefficient vector of a section over a frame.
#[derive(Clone, PartialEq, Eq)]
pub struct Section {
    ring: Ring,
    comps: Vec<Poly>,
}

impl Section {
    pub fn new(ring: &Ring, comps: Vec<Poly>) -> Section {
        debug_assert!(comps.iter().all(|c| c.ring() == ring), "component over a foreign ring");
        Section { ring: ring.clone(), comps }
    }

    pub fn zero(ring: &Ring, n: usize) -> Section {
        Section { ring: ring.clone(), comps: vec![ring.zero(); n] }
    }

    pub fn unit(ring: &Ring, n: usize, i: usize) -> Section {
        let mut s = Section::zero(ring, n);
        s.comps[i] = ring.one();
        s
    }

    pub fn from_rationals(ring: &Ring, v: &[Rational]) -> Section {
        Section::new(ring, v.iter().map(|c| ring.constant(c.clone())).collect())
    }

    /// Parse each component with the polynomial grammar.
    pub fn parse<S: AsRef<str>>(ring: &Ring, comps: &[S]) -> Result<Section, crate::PolyError> {
        Ok(Section::new(ring, comps.iter().map(|c| ring.parse(c.as_ref())).collect::<Result<_, _>>()?))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    pub fn comps(&self) -> &[Poly] {
        &self.comps
    }

    pub fn get(&self, i: usize) -> &Poly {
        &self.comps[i]
    }

    pub fn set(&mut self, i: usize, p: Poly) {
        self.comps[i] = p;
    }

    pub fn into_comps(self) -> Vec<Poly> {
        self.comps
    }

    pub fn scale(&self, f: &Poly) -> Section {
        if f.is_zero() {
            return Section::zero(&self.ring, self.len());
        }
        Section::new(&self.ring, self.comps.iter().map(|c| c * f).collect())
    }

    pub fn scale_rat(&self, c: &Rational) -> Section {
        Section::new(&self.ring, self.comps.iter().map(|p| p.scale(c)).collect())
    }

    /// `Σ_i self_i · other_i`.
    pub fn dot(&self, other: &Section) -> Poly {
        assert_eq!(self.len(), other.len(), "dot product of sections of different rank");
        let mut acc = self.ring.zero();
        for (a, b) in self.comps.iter().zip(&other.comps) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(a * b);
            }
        }
        acc
    }

    /// Concatenate two coefficient vectors.
    pub fn concat(&self, other: &Section) -> Section {
        let mut v = self.comps.clone();
        v.extend(other.comps.iter().cloned());
        Section::new(&self.ring, v)
    }

    pub fn slice(&self, start: usize, end: usize) -> Section {
        Section::new(&self.ring, self.comps[start..end].to_vec())
    }

    pub fn extend_to(&self, target: &Ring) -> Section {
        Section::new(target, self.comps.iter().map(|p| p.extend_to(target)).collect())
    }

    /// Weighted sum `Σ coeffs_i · sections_i`; `len` is the rank of the result.
    pub fn combination(ring: &Ring, len: usize, coeffs: &[Poly], sections: &[Section]) -> Section {
        let mut acc = Section::zero(ring, len);
        for (c, s) in coeffs.iter().zip(sections) {
            if !c.is_zero() {
                acc = &acc + &s.scale(c);
            }
        }
        acc
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Section{self}")
    }
}

impl Add<&Section> for &Section {
    type Output = Section;
    fn add(self, rhs: &Section) -> Section {
        assert_eq!(self.len(), rhs.len(), "adding sections of different rank");
        Section::new(&self.ring, self.comps.iter().zip(&rhs.comps).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&Section> for &Section {
    type Output = Section;
    fn sub(self, rhs: &Section) -> Section {
        assert_eq!(self.len(), rhs.len(), "subtracting sections of different rank");
        Section::new(&self.ring, self.comps.iter().zip(&rhs.comps).map(|(a, b)| a - b).collect())
    }
}

impl Add for Section {
    type Output = Section;
    fn add(self, rhs: Section) -> Section {
        &self + &rhs
    }
}

impl Sub for Section {
    type Output = Section;
    fn sub(self, rhs: Section) -> Section {
        &self - &rhs
    }
}

impl Neg for &Section {
    type Output = Section;
    fn neg(self) -> Section {
        Section::new(&self.ring, self.comps.iter().map(|p| -p).collect())
    }
}

impl Neg for Section {
    type Output = Section;
    fn neg(self) -> Section {
        -&self
    }
}

/// A bundle map as a matrix of polynomials: `rows` = target rank,
/// `cols` = source rank.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    ring: Ring,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Poly>>,
}

impl Mat {
    pub fn zero(ring: &Ring, rows: usize, cols: usize) -> Mat {
        Mat { ring: ring.clone(), rows, cols, entries: vec![vec![ring.zero(); cols]; rows] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Mat {
        let mut m = Mat::zero(ring, n, n);
        for i in 0..n {
            m.entries[i][i] = ring.one();
        }
        m
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Poly>>, cols: usize) -> Mat {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Mat { ring: ring.clone(), rows: rows.len(), cols, entries: rows }
    }

    pub fn from_columns(ring: &Ring, rows: usize, columns: &[Section]) -> Mat {
        let mut m = Mat::zero(ring, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for i in 0..rows {
                m.entries[i][j] = c.get(i).clone();
            }
        }
        m
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn column(&self, j: usize) -> Section {
        Section::new(&self.ring, self.entries.iter().map(|r| r[j].clone()).collect())
    }

    pub fn row(&self, i: usize) -> Section {
        Section::new(&self.ring, self.entries[i].clone())
    }

    pub fn apply(&self, s: &Section) -> Section {
        assert_eq!(self.cols, s.len(), "matrix/section dimension mismatch");
        Section::new(&self.ring, (0..self.rows).map(|i| self.row(i).dot(s)).collect())
    }

    pub fn transpose(&self) -> Mat {
        let entries = (0..self.cols).map(|j| self.entries.iter().map(|r| r[j].clone()).collect()).collect();
        Mat { ring: self.ring.clone(), rows: self.cols, cols: self.rows, entries }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "composition dimension mismatch");
        let cols: Vec<Section> = (0..other.cols).map(|j| self.apply(&other.column(j))).collect();
        Mat::from_columns(&self.ring, self.rows, &cols)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Poly::is_zero)
    }

    /// Entries as rationals when every entry is constant.
    pub fn as_constant(&self) -> Option<Vec<Vec<Rational>>> {
        self.entries.iter().map(|r| r.iter().map(Poly::as_constant).collect::<Option<Vec<_>>>()).collect()
    }

    pub fn from_rationals(ring: &Ring, m: &[Vec<Rational>], cols: usize) -> Mat {
        Mat::from_rows(ring, m.iter().map(|r| r.iter().map(|c| ring.constant(c.clone())).collect()).collect(), cols)
    }
}

impl Add<&Mat> for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        Mat { ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries }
    }
}

impl Sub<&Mat> for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        self + &(-rhs)
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        let entries = self.entries.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        Mat { ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries }
    }
}

/// Canonical `Q × B` pairing matrix for `Q = TM ⊕ E*`, `B = E ⊕ T*M`:
/// `⟨(X,ξ),(e,θ)⟩ = ξ(e) + θ(X)`.
pub fn canonical_pairing_matrix(ring: &Ring, n: usize, r: usize) -> Mat {
    let mut g = Mat::zero(ring, n + r, r + n);
    for i in 0..n {
        g.entries[i][r + i] = ring.one();
    }
    for k in 0..r {
        g.entries[n + k][k] = ring.one();
    }
    g
}

/// `⟨v, s⟩` for `v ∈ TM⊕E*`, `s ∈ E⊕T*M` with `n = dim M`.
pub fn canonical_pairing(v: &Section, s: &Section, n: usize) -> Poly {
    let r = v.len() - n;
    assert_eq!(s.len(), r + n, "canonical pairing rank mismatch");
    let xi = v.slice(n, n + r);
    let x = v.slice(0, n);
    &xi.dot(&s.slice(0, r)) + &x.dot(&s.slice(r, r + n))
}

/// `d_B φ = (0, dφ)` in `E ⊕ T*M`.
pub fn d_b(phi: &Poly, n: usize, r: usize) -> Section {
    Section::zero(phi.ring(), r).concat(&cartan::d(phi, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_examples() {
        let patch = Patch::standard(2);
        let ring = patch.ring();
        let p = |s: &str| ring.parse(s).unwrap();
        let d1 = Section::new(ring, vec![ring.one(), ring.zero(), ring.zero()]);
        let eps = Section::new(ring, vec![ring.one(), ring.zero(), ring.zero()]);
        assert!(canonical_pairing(&d1, &eps, 2).is_zero());
        let eps_star = Section::new(ring, vec![ring.zero(), ring.zero(), ring.one()]);
        assert_eq!(canonical_pairing(&eps_star, &eps, 2), ring.one());
        let v = Section::new(ring, vec![p("x1"), ring.zero(), ring.one()]);
        let s = Section::new(ring, vec![ring.one(), p("x2"), ring.zero()]);
        assert_eq!(canonical_pairing(&v, &s, 2), p("1 + x1*x2"));
    }

    #[test]
    fn pairing_matrix_matches_formula() {
        let ring = Ring::numbered("x", 2);
        let g = canonical_pairing_matrix(&ring, 2, 1);
        let v = Section::new(&ring, vec![ring.parse("x1").unwrap(), ring.int(2), ring.int(3)]);
        let s = Section::new(&ring, vec![ring.int(5), ring.parse("x2").unwrap(), ring.int(7)]);
        assert_eq!(v.dot(&g.apply(&s)), canonical_pairing(&v, &s, 2));
    }

    #[test]
    fn d_b_examples() {
        let ring = Ring::numbered("x", 2);
        let p = |s: &str| ring.parse(s).unwrap();
        assert_eq!(d_b(&p("x1"), 2, 1), Section::new(&ring, vec![ring.zero(), ring.one(), ring.zero()]));
        assert!(d_b(&p("7"), 2, 1).is_zero());
        assert_eq!(d_b(&p("x1*x2"), 2, 1), Section::new(&ring, vec![ring.zero(), p("x2"), p("x1")]));
    }

    #[test]
    fn tagged_bundles_validate_rank() {
        let patch = Patch::standard(2);
        assert!(Bundle::new(patch.clone(), vec!["a".into()], BundleTag::Tangent).is_err());
        assert!(Bundle::new(patch.clone(), vec!["a".into(), "a".into()], BundleTag::Plain).is_err());
        let b = Bundle::new(patch, vec!["e".into()], BundleTag::Plain).unwrap();
        assert_eq!(b.frame_section(0).len(), 1);
    }

    #[test]
    fn point_base_is_legal() {
        let patch = Patch::standard(0);
        let q = Bundle::tangent_plus_dual(&patch, &["e1".to_string(), "e2".to_string()]);
        assert_eq!(q.rank(), 2);
        let v = q.frame_section(0);
        let s = Section::unit(patch.ring(), 2, 0);
        assert_eq!(canonical_pairing(&v, &s, 0), patch.ring().one());
    }
}
