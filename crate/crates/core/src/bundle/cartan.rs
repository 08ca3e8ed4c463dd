//! Cartan calculus in coordinates.
//!
//! Vector fields and 1-forms are [`Section`]s whose length `k` does not
//! exceed the number of ring variables; component `i` refers to the
//! coordinate `i`. Using the leading `k` variables lets the same routines
//! serve the base patch and total spaces whose rings extend it.

use super::{Mat, Section};
use crate::symkernel::Poly;

/// `dφ` in the first `n` coordinates.
pub fn d(phi: &Poly, n: usize) -> Section {
    Section::new(phi.ring(), (0..n).map(|i| phi.partial(i)).collect())
}

/// `X(φ) = Σ X^i ∂_i φ`.
pub fn apply_vf(x: &Section, phi: &Poly) -> Poly {
    let mut acc = phi.ring().zero();
    for (i, xi) in x.comps().iter().enumerate() {
        if !xi.is_zero() {
            let dp = phi.partial(i);
            if !dp.is_zero() {
                acc += &(xi * &dp);
            }
        }
    }
    acc
}

/// `[X, Y]^j = X(Y^j) − Y(X^j)`.
pub fn vf_bracket(x: &Section, y: &Section) -> Section {
    assert_eq!(x.len(), y.len(), "vector fields of different dimension");
    let comps = (0..x.len()).map(|j| &apply_vf(x, y.get(j)) - &apply_vf(y, x.get(j))).collect();
    Section::new(x.ring(), comps)
}

/// `θ(X)`.
pub fn interior(x: &Section, theta: &Section) -> Poly {
    x.dot(theta)
}

/// `(ℒ_X θ)_j = X(θ_j) + Σ_i θ_i ∂_j X^i`.
pub fn lie_derivative_form(x: &Section, theta: &Section) -> Section {
    assert_eq!(x.len(), theta.len(), "vector field and form of different dimension");
    let comps = (0..x.len())
        .map(|j| {
            let mut c = apply_vf(x, theta.get(j));
            for i in 0..x.len() {
                if !theta.get(i).is_zero() {
                    c += &(theta.get(i) * &x.get(i).partial(j));
                }
            }
            c
        })
        .collect();
    Section::new(x.ring(), comps)
}

/// Matrix of `dθ`: `Ω_ab = ∂_a θ_b − ∂_b θ_a`.
pub fn d_form(theta: &Section) -> Mat {
    let n = theta.len();
    let ring = theta.ring();
    let mut m = Mat::zero(ring, n, n);
    for a in 0..n {
        for b in 0..n {
            m.entries[a][b] = &theta.get(b).partial(a) - &theta.get(a).partial(b);
        }
    }
    m
}

/// `ι_Y dα`, i.e. `(ι_Y dα)_b = Σ_a Y^a (∂_a α_b − ∂_b α_a)`.
pub fn iota_d(y: &Section, alpha: &Section) -> Section {
    let n = alpha.len();
    let comps = (0..n)
        .map(|b| {
            let mut c = y.ring().zero();
            for a in 0..n {
                if y.get(a).is_zero() {
                    continue;
                }
                let w = &alpha.get(b).partial(a) - &alpha.get(a).partial(b);
                if !w.is_zero() {
                    c += &(y.get(a) * &w);
                }
            }
            c
        })
        .collect();
    Section::new(y.ring(), comps)
}

/// `dθ(X, Y)`.
pub fn d_form_eval(theta: &Section, x: &Section, y: &Section) -> Poly {
    -x.dot(&iota_d(y, theta))
}
