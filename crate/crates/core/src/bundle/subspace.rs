//! Constant-coefficient subbundles and the exact rational linear algebra
//! behind them.
//!
//! A [`Subspace`] is spanned by linearly independent rational vectors. Its
//! complement is fixed once: reduce the frame to row echelon form with the
//! leftmost available pivot in each row, then take the standard basis
//! vectors of the non-pivot columns in index order. Membership of a
//! polynomial section is decided coefficientwise by expressing it in the
//! basis `frame ∪ complement` and checking that the complement part vanishes.

use num_traits::{One, Zero};
use thiserror::Error;

use super::{Mat, Section};
use crate::symkernel::{Poly, Rational, Ring};

pub type RMat = Vec<Vec<Rational>>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubspaceError {
    #[error("frame vector {index} has a non-constant coefficient; only constant frames are supported")]
    NonConstantFrame { index: usize },
    #[error("frame vectors are linearly dependent (rank {rank} < {count})")]
    DependentFrame { rank: usize, count: usize },
    #[error("frame vector {index} has length {found}, ambient rank is {expected}")]
    WrongLength { index: usize, expected: usize, found: usize },
    #[error("pairing matrix must be constant")]
    NonConstantPairing,
}

/// Row-reduce in place; returns the pivot columns.
pub fn rref(m: &mut RMat, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row >= m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = Rational::one() / &m[row][col];
        for c in m[row].iter_mut() {
            *c *= &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for c in 0..cols {
                    let delta = &f * &m[row][c];
                    m[i][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(m: &RMat, cols: usize) -> usize {
    rref(&mut m.clone(), cols).len()
}

/// Basis of `{v : m v = 0}`.
pub fn nullspace(m: &RMat, cols: usize) -> RMat {
    let mut r = m.clone();
    let pivots = rref(&mut r, cols);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -r[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn inverse(m: &RMat) -> Option<RMat> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut aug: RMat = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn det(m: &RMat) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else { return Rational::zero() };
        if p != col {
            a.swap(p, col);
            d = -d;
        }
        d *= &a[col][col];
        for i in col + 1..n {
            if !a[i][col].is_zero() {
                let f = &a[i][col] / &a[col][col];
                for c in col..n {
                    let delta = &f * &a[col][c];
                    a[i][c] -= delta;
                }
            }
        }
    }
    d
}

pub fn mat_mul(a: &RMat, b: &RMat, inner: usize, cols: usize) -> RMat {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = Rational::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Constant rational frame spanning a subbundle of a rank-`dim` bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    dim: usize,
    frame: RMat,
    complement: RMat,
    /// Inverse of the matrix whose columns are `frame` then `complement`.
    inv: RMat,
}

impl Subspace {
    pub fn new(dim: usize, frame: RMat) -> Result<Subspace, SubspaceError> {
        for (i, v) in frame.iter().enumerate() {
            if v.len() != dim {
                return Err(SubspaceError::WrongLength { index: i, expected: dim, found: v.len() });
            }
        }
        let mut reduced = frame.clone();
        let pivots = rref(&mut reduced, dim);
        if pivots.len() < frame.len() {
            return Err(SubspaceError::DependentFrame { rank: pivots.len(), count: frame.len() });
        }
        let complement: RMat = (0..dim)
            .filter(|c| !pivots.contains(c))
            .map(|c| (0..dim).map(|j| if j == c { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        let columns: Vec<&Vec<Rational>> = frame.iter().chain(complement.iter()).collect();
        let m: RMat = (0..dim).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
        let inv = inverse(&m).expect("frame plus complement is a basis");
        Ok(Subspace { dim, frame, complement, inv })
    }

    pub fn from_sections(dim: usize, frame: &[Section]) -> Result<Subspace, SubspaceError> {
        let mut rows = Vec::new();
        for (i, s) in frame.iter().enumerate() {
            if s.len() != dim {
                return Err(SubspaceError::WrongLength { index: i, expected: dim, found: s.len() });
            }
            let v: Option<Vec<Rational>> = s.comps().iter().map(Poly::as_constant).collect();
            rows.push(v.ok_or(SubspaceError::NonConstantFrame { index: i })?);
        }
        Subspace::new(dim, rows)
    }

    pub fn zero(dim: usize) -> Subspace {
        Subspace::new(dim, Vec::new()).expect("empty frame")
    }

    pub fn whole(dim: usize) -> Subspace {
        let frame = (0..dim).map(|i| (0..dim).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
        Subspace::new(dim, frame).expect("standard basis")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.frame.len()
    }

    pub fn frame(&self) -> &RMat {
        &self.frame
    }

    pub fn complement(&self) -> &RMat {
        &self.complement
    }

    pub fn frame_sections(&self, ring: &Ring) -> Vec<Section> {
        self.frame.iter().map(|v| Section::from_rationals(ring, v)).collect()
    }

    pub fn complement_sections(&self, ring: &Ring) -> Vec<Section> {
        self.complement.iter().map(|v| Section::from_rationals(ring, v)).collect()
    }

    /// Coordinates of `s` in the basis `frame ∪ complement`.
    pub fn coordinates(&self, s: &Section) -> (Vec<Poly>, Vec<Poly>) {
        assert_eq!(s.len(), self.dim, "section rank differs from ambient rank");
        let ring = s.ring();
        let mut all: Vec<Poly> = Vec::with_capacity(self.dim);
        for row in &self.inv {
            let mut acc = ring.zero();
            for (c, p) in row.iter().zip(s.comps()) {
                if !c.is_zero() && !p.is_zero() {
                    acc += &p.scale(c);
                }
            }
            all.push(acc);
        }
        let rest = all.split_off(self.rank());
        (all, rest)
    }

    /// The component of `s` along the fixed complement, written in ambient
    /// coordinates. Zero exactly when `s` is a section of the subbundle.
    pub fn residual(&self, s: &Section) -> Section {
        let (_, rest) = self.coordinates(s);
        let mut out = Section::zero(s.ring(), self.dim);
        for (coeff, v) in rest.iter().zip(&self.complement) {
            for (j, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    let t = &out.get(j).clone() + &coeff.scale(c);
                    out.set(j, t);
                }
            }
        }
        out
    }

    pub fn contains(&self, s: &Section) -> bool {
        self.residual(s).is_zero()
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        let ring = Ring::numbered("x", 0);
        self.contains(&Section::from_rationals(&ring, v))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.dim == other.dim && self.frame.iter().all(|v| other.contains_vector(v))
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.rank() == other.rank() && self.is_subspace_of(other)
    }

    /// Annihilator inside the paired bundle, for a pairing given by a
    /// constant matrix `g` with `⟨v, w⟩ = vᵀ g w` and `self` on the left.
    pub fn annihilator_right(&self, g: &Mat) -> Result<Subspace, SubspaceError> {
        let g = g.as_constant().ok_or(SubspaceError::NonConstantPairing)?;
        let cols = g.first().map_or(0, Vec::len);
        let ug = mat_mul(&self.frame, &g, self.dim, cols);
        Subspace::new(cols, nullspace(&ug, cols))
    }

    /// Annihilator on the left side of the pairing, `self` on the right.
    pub fn annihilator_left(&self, g: &Mat) -> Result<Subspace, SubspaceError> {
        self.annihilator_right(&g.transpose())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::canonical_pairing_matrix;
    use crate::symkernel::{rat, Ring};
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn tangent_plane_annihilator() {
        // U = span{(∂1,0),(∂2,0)} in TM⊕E*, n = 2, r = 1
        let ring = Ring::numbered("x", 2);
        let g = canonical_pairing_matrix(&ring, 2, 1);
        let u = Subspace::new(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let ann = u.annihilator_right(&g).unwrap();
        assert!(ann.same_as(&Subspace::new(3, vec![v(&[1, 0, 0])]).unwrap()));
    }

    #[test]
    fn whole_space_has_zero_annihilator() {
        let ring = Ring::numbered("x", 2);
        let g = canonical_pairing_matrix(&ring, 2, 1);
        assert_eq!(Subspace::whole(3).annihilator_right(&g).unwrap().rank(), 0);
    }

    #[test]
    fn graph_annihilator() {
        // E = T*M over R², σ = id. U = {(X, −σ*X)}, K = {(α, σα)}.
        let ring = Ring::numbered("x", 2);
        let g = canonical_pairing_matrix(&ring, 2, 2);
        let u = Subspace::new(4, vec![v(&[1, 0, -1, 0]), v(&[0, 1, 0, -1])]).unwrap();
        let k = Subspace::new(4, vec![v(&[1, 0, 1, 0]), v(&[0, 1, 0, 1])]).unwrap();
        assert!(u.annihilator_right(&g).unwrap().same_as(&k));
        assert!(k.annihilator_left(&g).unwrap().same_as(&u));
    }

    #[test]
    fn rejects_bad_frames() {
        assert_eq!(Subspace::new(2, vec![v(&[1, 1]), v(&[2, 2])]), Err(SubspaceError::DependentFrame { rank: 1, count: 2 }));
        let ring = Ring::numbered("x", 1);
        let s = Section::parse(&ring, &["x1", "0"]).unwrap();
        assert_eq!(Subspace::from_sections(2, &[s]), Err(SubspaceError::NonConstantFrame { index: 0 }));
    }

    #[test]
    fn membership_of_polynomial_sections() {
        let ring = Ring::numbered("x", 2);
        let k = Subspace::new(3, vec![v(&[1, 1, 0])]).unwrap();
        let inside = Section::parse(&ring, &["x1^2", "x1^2", "0"]).unwrap();
        let outside = Section::parse(&ring, &["x1", "0", "x2"]).unwrap();
        assert!(k.contains(&inside));
        assert!(!k.contains(&outside));
        let res = k.residual(&outside);
        assert!(!res.is_zero());
        assert!(k.contains(&(&outside - &res)));
    }

    #[test]
    fn complement_uses_non_pivot_columns() {
        let k = Subspace::new(3, vec![v(&[0, 1, 1])]).unwrap();
        assert_eq!(k.complement(), &vec![v(&[1, 0, 0]), v(&[0, 0, 1])]);
    }

    #[test]
    fn determinant_and_inverse_agree() {
        let m = vec![v(&[2, 1]), v(&[5, 3])];
        assert_eq!(det(&m), rat(1));
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv, 2, 2), vec![v(&[1, 0]), v(&[0, 1])]);
        assert!(inverse(&vec![v(&[1, 2]), v(&[2, 4])]).is_none());
    }

    fn frame_strategy() -> impl Strategy<Value = RMat> {
        prop::collection::vec(prop::collection::vec(-2i64..3, 4), 0..4).prop_map(|rows| rows.into_iter().map(|r| v(&r)).collect::<RMat>())
    }

    proptest! {
        #[test]
        fn double_annihilator_is_identity(rows in frame_strategy()) {
            let mut reduced = rows.clone();
            let pivots = rref(&mut reduced, 4);
            let basis: RMat = reduced.into_iter().take(pivots.len()).collect();
            let ring = Ring::numbered("x", 2);
            let g = canonical_pairing_matrix(&ring, 2, 2);
            let u = Subspace::new(4, basis).unwrap();
            let ann = u.annihilator_right(&g).unwrap();
            prop_assert_eq!(u.rank() + ann.rank(), 4);
            let back = ann.annihilator_left(&g).unwrap();
            prop_assert!(back.same_as(&u));
        }
    }
}
