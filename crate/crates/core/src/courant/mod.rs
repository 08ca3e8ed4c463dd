//! Courant algebroids presented by a frame with constant pairing.
//!
//! The bracket of arbitrary sections follows from the frame table through
//! `[e1, φe2] = φ[e1,e2] + ρ(e1)(φ) e2` and the symmetry axiom, which
//! together give `[φe1, e2] = φ[e1,e2] − ρ(e2)(φ) e1 + ⟨e1,e2⟩ 𝒟φ`.

pub mod manin;

use thiserror::Error;

use crate::battery::Battery;
use crate::bundle::cartan::{apply_vf, d, vf_bracket};
use crate::bundle::subspace::{inverse, Subspace, SubspaceError};
use crate::bundle::{Mat, Section};
use crate::report::{CheckReport, Checker};
use crate::symkernel::{Poly, Rational, Ring};

use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CourantError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("the pairing must be a constant symmetric nondegenerate matrix")]
    BadPairing,
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CourantData {
    ring: Ring,
    rank: usize,
    anchor: Mat,
    pairing: Mat,
    pairing_inv: Vec<Vec<Rational>>,
    structure: Vec<Vec<Section>>,
}

impl CourantData {
    pub fn new(ring: &Ring, anchor: Mat, pairing: Mat, structure: Vec<Vec<Section>>) -> Result<CourantData, CourantError> {
        let rank = anchor.cols;
        if anchor.rows != ring.len() {
            return Err(CourantError::Shape(format!("anchor must have {} rows", ring.len())));
        }
        if pairing.rows != rank || pairing.cols != rank {
            return Err(CourantError::Shape(format!("pairing must be {rank}x{rank}")));
        }
        if structure.len() != rank || structure.iter().any(|r| r.len() != rank || r.iter().any(|s| s.len() != rank)) {
            return Err(CourantError::Shape(format!("bracket table must be {rank}x{rank}")));
        }
        let g = pairing.as_constant().ok_or(CourantError::BadPairing)?;
        if (0..rank).any(|i| (0..rank).any(|j| g[i][j] != g[j][i])) {
            return Err(CourantError::BadPairing);
        }
        let pairing_inv = inverse(&g).ok_or(CourantError::BadPairing)?;
        Ok(CourantData { ring: ring.clone(), rank, anchor, pairing, pairing_inv, structure })
    }

    /// `TM ⊕ T*M` with the Courant–Dorfman bracket in the coordinate frame
    /// `[∂_1..∂_n, dx_1..dx_n]`, where all frame brackets vanish.
    pub fn standard(ring: &Ring) -> CourantData {
        let n = ring.len();
        let mut anchor = Mat::zero(ring, n, 2 * n);
        let mut pairing = Mat::zero(ring, 2 * n, 2 * n);
        for i in 0..n {
            anchor.entries[i][i] = ring.one();
            pairing.entries[i][n + i] = ring.one();
            pairing.entries[n + i][i] = ring.one();
        }
        let structure = vec![vec![Section::zero(ring, 2 * n); 2 * n]; 2 * n];
        CourantData::new(ring, anchor, pairing, structure).expect("standard data is well formed")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn anchor(&self) -> &Mat {
        &self.anchor
    }

    pub fn pairing_matrix(&self) -> &Mat {
        &self.pairing
    }

    pub fn structure(&self, i: usize, j: usize) -> &Section {
        &self.structure[i][j]
    }

    pub fn with_structure(&self, i: usize, j: usize, value: Section) -> CourantData {
        let mut out = self.clone();
        out.structure[i][j] = value;
        out
    }

    pub fn rho(&self, e: &Section) -> Section {
        self.anchor.apply(e)
    }

    pub fn pair(&self, a: &Section, b: &Section) -> Poly {
        a.dot(&self.pairing.apply(b))
    }

    /// `𝒟φ` with `⟨𝒟φ, e⟩ = ρ(e)(φ)`.
    pub fn big_d(&self, phi: &Poly) -> Section {
        let rt = self.anchor.transpose().apply(&d(phi, self.ring.len()));
        let comps = (0..self.rank)
            .map(|a| {
                let mut acc = self.ring.zero();
                for (b, c) in self.pairing_inv[a].iter().enumerate() {
                    if !c.is_zero() && !rt.get(b).is_zero() {
                        acc += &rt.get(b).scale(c);
                    }
                }
                acc
            })
            .collect();
        Section::new(&self.ring, comps)
    }

    pub fn bracket(&self, a: &Section, b: &Section) -> Section {
        let ring = &self.ring;
        let mut out = Section::zero(ring, self.rank);
        for (i, phi) in a.comps().iter().enumerate() {
            if phi.is_zero() {
                continue;
            }
            for (j, psi) in b.comps().iter().enumerate() {
                if !psi.is_zero() && !self.structure[i][j].is_zero() {
                    out = &out + &self.structure[i][j].scale(&(phi * psi));
                }
            }
        }
        let (ra, rb) = (self.rho(a), self.rho(b));
        let moved = (0..self.rank).map(|j| &apply_vf(&ra, b.get(j)) - &apply_vf(&rb, a.get(j))).collect();
        out = &out + &Section::new(ring, moved);
        let gb = self.pairing.apply(b);
        let n = ring.len();
        let mut dphi = Section::zero(ring, n);
        for (i, phi) in a.comps().iter().enumerate() {
            if !phi.is_zero() && !gb.get(i).is_zero() {
                dphi = &dphi + &d(phi, n).scale(gb.get(i));
            }
        }
        if dphi.is_zero() {
            return out;
        }
        // Σ_i ⟨e_i, b⟩ 𝒟φ_i, with 𝒟 linear in dφ
        let rt = self.anchor.transpose().apply(&dphi);
        let corr = (0..self.rank)
            .map(|a| {
                let mut acc = ring.zero();
                for (b, c) in self.pairing_inv[a].iter().enumerate() {
                    if !c.is_zero() && !rt.get(b).is_zero() {
                        acc += &rt.get(b).scale(c);
                    }
                }
                acc
            })
            .collect();
        &out + &Section::new(ring, corr)
    }

    /// Axioms (1)–(3), the derived anchor property and the right Leibniz rule.
    pub fn check_axioms(&self, battery: &Battery) -> CheckReport {
        let r = self.rank;
        let mut p1 = Checker::new("courant-jacobi", "Courant axiom (1): Leibniz form of Jacobi");
        let mut p2 = Checker::new("courant-invariance", "Courant axiom (2): pairing invariance");
        let mut p3 = Checker::new("courant-symmetry", "Courant axiom (3): symmetric part equals D of the pairing");
        let mut p4 = Checker::new("courant-anchor", "Courant property (4): anchor preserves brackets");
        let mut p5 = Checker::new("courant-leibniz", "Courant property (5): Leibniz rule");
        for t in battery.tuples(&[r, r, r]) {
            let (e1, e2, e3) = (&t[0], &t[1], &t[2]);
            let inputs = [e1.to_string(), e2.to_string(), e3.to_string()];
            let lhs = self.bracket(e1, &self.bracket(e2, e3));
            let rhs = &self.bracket(&self.bracket(e1, e2), e3) + &self.bracket(e2, &self.bracket(e1, e3));
            let diff = &lhs - &rhs;
            p1.expect_zero("[e1,[e2,e3]] = [[e1,e2],e3] + [e2,[e1,e3]]", diff.is_zero(), &inputs, &diff);
            let lhs = apply_vf(&self.rho(e1), &self.pair(e2, e3));
            let rhs = &self.pair(&self.bracket(e1, e2), e3) + &self.pair(e2, &self.bracket(e1, e3));
            let diff = &lhs - &rhs;
            p2.expect_zero("rho(e1)<e2,e3> = <[e1,e2],e3> + <e2,[e1,e3]>", diff.is_zero(), &inputs, &diff);
        }
        let fns = battery.nontrivial_functions();
        for t in battery.tuples(&[r, r]) {
            let (e1, e2) = (&t[0], &t[1]);
            let inputs = [e1.to_string(), e2.to_string()];
            let e12 = self.bracket(e1, e2);
            let diff = &(&e12 + &self.bracket(e2, e1)) - &self.big_d(&self.pair(e1, e2));
            p3.expect_zero("[e1,e2] + [e2,e1] = D<e1,e2>", diff.is_zero(), &inputs, &diff);
            let diff = &self.rho(&e12) - &vf_bracket(&self.rho(e1), &self.rho(e2));
            p4.expect_zero("rho[e1,e2] = [rho e1, rho e2]", diff.is_zero(), &inputs, &diff);
            for f in &fns {
                let lhs = self.bracket(e1, &e2.scale(f));
                let rhs = &e12.scale(f) + &e2.scale(&apply_vf(&self.rho(e1), f));
                let diff = &lhs - &rhs;
                p5.expect_zero("[e1, f e2] = f[e1,e2] + rho(e1)(f) e2", diff.is_zero(), &inputs, &diff);
            }
        }
        for phi in battery.functions() {
            for e in battery.sections(r) {
                let diff = &self.pair(&e, &self.big_d(&phi)) - &apply_vf(&self.rho(&e), &phi);
                p4.expect_zero("<e, D phi> = rho(e)(phi)", diff.is_zero(), &[e.to_string(), phi.to_string()], &diff);
            }
        }
        let mut leibniz = p5.finish();
        leibniz.notes.push("holds by construction of the frame extension; evaluated as a guard".into());
        CheckReport::combine(
            "courant-axioms",
            "Courant algebroid axioms (1)-(3) with derived (4)-(5)",
            vec![p1.finish(), p2.finish(), p3.finish(), p4.finish(), leibniz],
        )
    }

    /// `U` is isotropic, has half rank, and `Γ(U)` is closed under the bracket.
    pub fn check_dirac(&self, u: &Subspace, battery: &Battery) -> CheckReport {
        let mut ck = Checker::new("dirac-in-courant", "Dirac structure in a Courant algebroid");
        let frames = u.frame_sections(&self.ring);
        if 2 * u.rank() != self.rank {
            ck.fail("rank U = rank C / 2", &[], format!("rank U = {}, rank C = {}", u.rank(), self.rank));
        }
        for a in &frames {
            for b in &frames {
                let p = self.pair(a, b);
                ck.expect_zero("<u, u'> = 0", p.is_zero(), &[a.to_string(), b.to_string()], &p);
            }
        }
        let fns = battery.functions();
        for a in &frames {
            for b in &frames {
                for f in &fns {
                    for (x, y) in [(a.scale(f), b.clone()), (a.clone(), b.scale(f))] {
                        let res = u.residual(&self.bracket(&x, &y));
                        ck.expect_zero("[Γ(U), Γ(U)] ⊆ Γ(U)", res.is_zero(), &[x.to_string(), y.to_string()], &res);
                    }
                }
            }
        }
        ck.finish()
    }

    /// Gram determinant of the constant pairing.
    pub fn pairing_determinant(&self) -> Rational {
        crate::bundle::subspace::det(&self.pairing.as_constant().expect("constant pairing"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::battery::DEFAULT_SEED;

    fn s(ring: &Ring, v: &[&str]) -> Section {
        Section::parse(ring, v).unwrap()
    }

    #[test]
    fn standard_bracket_values() {
        let ring = Ring::numbered("x", 2);
        let c = CourantData::standard(&ring);
        assert!(c.bracket(&s(&ring, &["1", "0", "0", "0"]), &s(&ring, &["0", "1", "0", "0"])).is_zero());
        assert_eq!(c.bracket(&s(&ring, &["1", "0", "0", "0"]), &s(&ring, &["0", "0", "0", "x1"])), s(&ring, &["0", "0", "0", "1"]));
        let f = ring.parse("x1*x2").unwrap();
        assert_eq!(c.pair(&c.big_d(&f), &s(&ring, &["1", "0", "0", "0"])), ring.parse("x2").unwrap());
    }

    #[test]
    fn bracket_matches_the_cartan_formula() {
        let ring = Ring::numbered("x", 2);
        let c = CourantData::standard(&ring);
        let b = Battery::new(&ring, 4);
        for t in b.tuples(&[4, 4]) {
            let (x, al) = (t[0].slice(0, 2), t[0].slice(2, 4));
            let (y, be) = (t[1].slice(0, 2), t[1].slice(2, 4));
            let form = &crate::bundle::cartan::lie_derivative_form(&x, &be) - &crate::bundle::cartan::iota_d(&y, &al);
            assert_eq!(c.bracket(&t[0], &t[1]), vf_bracket(&x, &y).concat(&form));
        }
    }

    #[test]
    fn standard_passes_and_perturbation_fails() {
        let ring = Ring::numbered("x", 2);
        let c = CourantData::standard(&ring);
        let b = Battery::new(&ring, DEFAULT_SEED);
        assert!(c.check_axioms(&b).passed());
        let bad = c.with_structure(0, 1, s(&ring, &["0", "0", "1", "0"]));
        let rep = bad.check_axioms(&b);
        assert!(!rep.passed());
        assert!(!rep.all_witnesses().is_empty());
    }

    #[test]
    fn point_with_nothing_passes() {
        let ring = Ring::numbered("x", 0);
        let c = CourantData::new(&ring, Mat::zero(&ring, 0, 0), Mat::zero(&ring, 0, 0), vec![]).unwrap();
        assert!(c.check_axioms(&Battery::new(&ring, 1)).passed());
    }

    #[test]
    fn tangent_bundle_is_dirac() {
        let ring = Ring::numbered("x", 2);
        let c = CourantData::standard(&ring);
        let u = Subspace::from_sections(4, &[s(&ring, &["1", "0", "0", "0"]), s(&ring, &["0", "1", "0", "0"])]).unwrap();
        assert!(c.check_dirac(&u, &Battery::new(&ring, 1)).passed());
        let not = Subspace::from_sections(4, &[s(&ring, &["1", "0", "1", "0"]), s(&ring, &["0", "1", "0", "0"])]).unwrap();
        assert!(!c.check_dirac(&not, &Battery::new(&ring, 1)).passed());
    }
}
