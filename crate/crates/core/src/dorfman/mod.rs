//! Dorfman connections `Δ: Γ(Q) × Γ(B) → Γ(B)` over a pre-dual.
//!
//! A connection is stored by its frame symbols `Δ_{q_i} b_j`. Arbitrary
//! arguments are handled by the two extension rules
//!
//! ```text
//! Δ_{φq} b = φ Δ_q b + ⟨q, b⟩ d_B φ
//! Δ_q (φb) = φ Δ_q b + ρ_Q(q)(φ) b
//! ```
//!
//! which combine into a single closed formula used by [`DorfmanConnection::apply`].
//! The third axiom, relating `Δ` to the dull bracket on `Q`, is checked.

pub mod bott;
pub mod constructions;

use thiserror::Error;

use crate::algebroid::{AlgebroidError, AnchoredBracket};
use crate::battery::Battery;
use crate::bundle::cartan::{apply_vf, d};
use crate::bundle::subspace::inverse;
use crate::bundle::{canonical_pairing_matrix, Mat, Section};
use crate::report::{CheckReport, Checker};
use num_traits::Zero;

use crate::symkernel::{Poly, Rational, Ring};

pub use constructions::{im_form_dorfman, standard_curvature_closed_form, standard_dorfman, trivial_dorfman, Christoffel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DorfmanError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("the pairing is not a constant matrix")]
    NonConstantPairing,
    #[error("the pairing is degenerate, so the dual bracket is undefined")]
    DegeneratePairing,
    #[error("the bracket anchor differs from the pre-dual anchor")]
    AnchorMismatch,
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
    #[error("{0}")]
    Invalid(String),
}

/// `(B, d_B, ⟨·,·⟩)` paired with `Q`.
///
/// The pairing is `⟨q, b⟩ = qᵀ G b`, the anchor of `Q` is an `n × rank Q`
/// matrix, and `d_B φ = D · dφ` for a `rank B × n` matrix `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreDual {
    ring: Ring,
    anchor: Mat,
    pairing: Mat,
    d_matrix: Mat,
    /// `(n, r)` when `Q = TM⊕E*` and `B = E⊕T*M` with the canonical data.
    layout: Option<(usize, usize)>,
}

impl PreDual {
    pub fn new(ring: &Ring, anchor: Mat, pairing: Mat, d_matrix: Mat) -> Result<PreDual, DorfmanError> {
        let n = ring.len();
        let (qr, br) = (pairing.rows, pairing.cols);
        if anchor.rows != n || anchor.cols != qr {
            return Err(DorfmanError::Shape(format!("anchor must be {n}x{qr}")));
        }
        if d_matrix.rows != br || d_matrix.cols != n {
            return Err(DorfmanError::Shape(format!("d_B matrix must be {br}x{n}")));
        }
        Ok(PreDual { ring: ring.clone(), anchor, pairing, d_matrix, layout: None })
    }

    /// `TM⊕E*` paired with `E⊕T*M`, anchor `pr_TM`, `d_B φ = (0, dφ)`.
    pub fn canonical(ring: &Ring, r: usize) -> PreDual {
        let n = ring.len();
        let mut anchor = Mat::zero(ring, n, n + r);
        let mut dm = Mat::zero(ring, r + n, n);
        for i in 0..n {
            anchor.entries[i][i] = ring.one();
            dm.entries[r + i][i] = ring.one();
        }
        PreDual { ring: ring.clone(), anchor, pairing: canonical_pairing_matrix(ring, n, r), d_matrix: dm, layout: Some((n, r)) }
    }

    /// Zero pairing and zero `d_B`.
    pub fn trivial(ring: &Ring, anchor: Mat, b_rank: usize) -> PreDual {
        let qr = anchor.cols;
        PreDual {
            ring: ring.clone(),
            pairing: Mat::zero(ring, qr, b_rank),
            d_matrix: Mat::zero(ring, b_rank, ring.len()),
            anchor,
            layout: None,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn q_rank(&self) -> usize {
        self.pairing.rows
    }

    pub fn b_rank(&self) -> usize {
        self.pairing.cols
    }

    pub fn anchor(&self) -> &Mat {
        &self.anchor
    }

    pub fn pairing_matrix(&self) -> &Mat {
        &self.pairing
    }

    pub fn d_matrix(&self) -> &Mat {
        &self.d_matrix
    }

    pub fn layout(&self) -> Option<(usize, usize)> {
        self.layout
    }

    pub fn pair(&self, q: &Section, b: &Section) -> Poly {
        q.dot(&self.pairing.apply(b))
    }

    pub fn d_b(&self, phi: &Poly) -> Section {
        self.d_matrix.apply(&d(phi, self.ring.len()))
    }

    /// `⟨q, d_B φ⟩ = ρ_Q(q)(φ)` on the battery.
    pub fn check_compatibility(&self, battery: &Battery) -> CheckReport {
        let mut ck = Checker::new("predual", "pre-dual compatibility of pairing, anchor and d_B");
        for q in battery.sections(self.q_rank()) {
            for phi in battery.functions() {
                let diff = &self.pair(&q, &self.d_b(&phi)) - &apply_vf(&self.anchor.apply(&q), &phi);
                ck.expect_zero("<q, d_B phi> = rho(q)(phi)", diff.is_zero(), &[q.to_string(), phi.to_string()], &diff);
            }
        }
        ck.finish()
    }

    fn constant_inverse(&self) -> Result<Vec<Vec<Rational>>, DorfmanError> {
        let g = self.pairing.as_constant().ok_or(DorfmanError::NonConstantPairing)?;
        if self.q_rank() != self.b_rank() {
            return Err(DorfmanError::DegeneratePairing);
        }
        inverse(&g).ok_or(DorfmanError::DegeneratePairing)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DorfmanConnection {
    predual: PreDual,
    bracket: AnchoredBracket,
    symbols: Vec<Vec<Section>>,
}

impl DorfmanConnection {
    /// `symbols[i][j] = Δ_{q_i} b_j`.
    pub fn new(predual: PreDual, bracket: AnchoredBracket, symbols: Vec<Vec<Section>>) -> Result<DorfmanConnection, DorfmanError> {
        let (qr, br) = (predual.q_rank(), predual.b_rank());
        if bracket.rank() != qr {
            return Err(DorfmanError::Shape(format!("bracket rank {} differs from Q rank {qr}", bracket.rank())));
        }
        if bracket.anchor() != predual.anchor() {
            return Err(DorfmanError::AnchorMismatch);
        }
        if symbols.len() != qr || symbols.iter().any(|row| row.len() != br || row.iter().any(|s| s.len() != br)) {
            return Err(DorfmanError::Shape(format!("symbol table must be {qr}x{br} with sections of rank {br}")));
        }
        Ok(DorfmanConnection { predual, bracket, symbols })
    }

    /// The connection determined by its symbols alone, with the dual bracket
    /// defined through axiom (c). Needs a constant nondegenerate pairing.
    pub fn from_symbols(predual: PreDual, symbols: Vec<Vec<Section>>) -> Result<DorfmanConnection, DorfmanError> {
        let placeholder = AnchoredBracket::new(
            predual.ring(),
            predual.anchor().clone(),
            vec![vec![Section::zero(predual.ring(), predual.q_rank()); predual.q_rank()]; predual.q_rank()],
        )?;
        let provisional = DorfmanConnection::new(predual, placeholder, symbols)?;
        let bracket = provisional.dual_bracket()?;
        Ok(DorfmanConnection { bracket, ..provisional })
    }

    /// The connection dual to a dull bracket on `Q`.
    pub fn from_dull(predual: PreDual, bracket: AnchoredBracket) -> Result<DorfmanConnection, DorfmanError> {
        if bracket.anchor() != predual.anchor() {
            return Err(DorfmanError::AnchorMismatch);
        }
        let ginv = predual.constant_inverse()?;
        let ring = predual.ring().clone();
        let (qr, br) = (predual.q_rank(), predual.b_rank());
        let g = predual.pairing_matrix().clone();
        let mut symbols = Vec::with_capacity(qr);
        for i in 0..qr {
            let mut row = Vec::with_capacity(br);
            for j in 0..br {
                // ⟨q_k, Δ_{q_i} b_j⟩ = ρ(q_i)⟨q_k, b_j⟩ − ⟨[q_i, q_k], b_j⟩
                let t: Vec<Poly> = (0..qr)
                    .map(|k| {
                        let c = bracket.structure(i, k);
                        -&c.dot(&g.column(j))
                    })
                    .collect();
                let comps = (0..br)
                    .map(|a| {
                        let mut acc = ring.zero();
                        for (k, tk) in t.iter().enumerate() {
                            if !ginv[a][k].is_zero() && !tk.is_zero() {
                                acc += &tk.scale(&ginv[a][k]);
                            }
                        }
                        acc
                    })
                    .collect();
                row.push(Section::new(&ring, comps));
            }
            symbols.push(row);
        }
        DorfmanConnection::new(predual, bracket, symbols)
    }

    pub fn ring(&self) -> &Ring {
        self.predual.ring()
    }

    pub fn predual(&self) -> &PreDual {
        &self.predual
    }

    pub fn bracket(&self) -> &AnchoredBracket {
        &self.bracket
    }

    pub fn symbol(&self, i: usize, j: usize) -> &Section {
        &self.symbols[i][j]
    }

    pub fn symbols(&self) -> &Vec<Vec<Section>> {
        &self.symbols
    }

    pub fn q_rank(&self) -> usize {
        self.predual.q_rank()
    }

    pub fn b_rank(&self) -> usize {
        self.predual.b_rank()
    }

    /// A copy with one symbol replaced and the same bracket on `Q`.
    pub fn with_symbol(&self, i: usize, j: usize, value: Section) -> DorfmanConnection {
        let mut out = self.clone();
        out.symbols[i][j] = value;
        out
    }

    /// A copy whose bracket on `Q` is replaced.
    pub fn with_bracket(&self, bracket: AnchoredBracket) -> Result<DorfmanConnection, DorfmanError> {
        DorfmanConnection::new(self.predual.clone(), bracket, self.symbols.clone())
    }

    /// `Δ_q b = Σ φ_i ψ_j Δ_{q_i} b_j + Σ_j ρ(q)(ψ_j) b_j + Σ_i ⟨q_i, b⟩ d_B φ_i`.
    pub fn apply(&self, q: &Section, b: &Section) -> Section {
        assert_eq!(q.len(), self.q_rank(), "Q argument has the wrong rank");
        assert_eq!(b.len(), self.b_rank(), "B argument has the wrong rank");
        let ring = self.ring();
        let n = ring.len();
        let mut out = Section::zero(ring, self.b_rank());
        for (i, phi) in q.comps().iter().enumerate() {
            if phi.is_zero() {
                continue;
            }
            for (j, psi) in b.comps().iter().enumerate() {
                if psi.is_zero() || self.symbols[i][j].is_zero() {
                    continue;
                }
                out = &out + &self.symbols[i][j].scale(&(phi * psi));
            }
        }
        let rq = self.predual.anchor().apply(q);
        let moved: Vec<Poly> = b.comps().iter().map(|psi| apply_vf(&rq, psi)).collect();
        out = &out + &Section::new(ring, moved);
        // Σ_m (Σ_i ⟨q_i, b⟩ ∂_m φ_i) D_m
        let gb = self.predual.pairing_matrix().apply(b);
        let mut dphi = Section::zero(ring, n);
        for (i, phi) in q.comps().iter().enumerate() {
            if phi.is_zero() || gb.get(i).is_zero() {
                continue;
            }
            dphi = &dphi + &d(phi, n).scale(gb.get(i));
        }
        &out + &self.predual.d_matrix().apply(&dphi)
    }

    /// The bracket on `Q` defined by axiom (c) through a constant
    /// nondegenerate pairing.
    pub fn dual_bracket(&self) -> Result<AnchoredBracket, DorfmanError> {
        let ginv = self.predual.constant_inverse()?;
        let ring = self.ring().clone();
        let qr = self.q_rank();
        let g = self.predual.pairing_matrix();
        let mut table = Vec::with_capacity(qr);
        for i in 0..qr {
            let mut row = Vec::with_capacity(qr);
            for k in 0..qr {
                // ⟨c_ik, b_j⟩ = −⟨q_k, Δ_{q_i} b_j⟩ on constant frames
                let t: Vec<Poly> = (0..qr).map(|j| -&g.row(k).dot(&self.symbols[i][j])).collect();
                // c^T G = t  ⇒  c = G^{-T} t
                let comps = (0..qr)
                    .map(|m| {
                        let mut acc = ring.zero();
                        for (j, tj) in t.iter().enumerate() {
                            if !ginv[j][m].is_zero() && !tj.is_zero() {
                                acc += &tj.scale(&ginv[j][m]);
                            }
                        }
                        acc
                    })
                    .collect();
                row.push(Section::new(&ring, comps));
            }
            table.push(row);
        }
        Ok(AnchoredBracket::new(&ring, self.predual.anchor().clone(), table)?)
    }

    /// Axioms (a), (b) and (c) on the battery.
    pub fn check_axioms(&self, battery: &Battery) -> CheckReport {
        let (qr, br) = (self.q_rank(), self.b_rank());
        let mut ck = Checker::new("dorfman-axioms", "Dorfman connection axioms (a), (b), (c)");
        let fns = battery.nontrivial_functions();
        for t in battery.tuples(&[qr, br]) {
            let (q, b) = (&t[0], &t[1]);
            let base = self.apply(q, b);
            for f in &fns {
                let lhs = self.apply(&q.scale(f), b);
                let rhs = &base.scale(f) + &self.predual.d_b(f).scale(&self.predual.pair(q, b));
                let diff = &lhs - &rhs;
                ck.expect_zero(
                    "(a) D_{fq}b = f D_q b + <q,b> d_B f",
                    diff.is_zero(),
                    &[q.to_string(), b.to_string(), f.to_string()],
                    &diff,
                );
                let lhs = self.apply(q, &b.scale(f));
                let rhs = &base.scale(f) + &b.scale(&self.bracket.act(q, f));
                let diff = &lhs - &rhs;
                ck.expect_zero(
                    "(b) D_q(fb) = f D_q b + rho(q)(f) b",
                    diff.is_zero(),
                    &[q.to_string(), b.to_string(), f.to_string()],
                    &diff,
                );
            }
        }
        for t in battery.tuples(&[qr, qr, br]) {
            let (q, qp, b) = (&t[0], &t[1], &t[2]);
            let lhs = self.bracket.act(q, &self.predual.pair(qp, b));
            let rhs = &self.predual.pair(&self.bracket.bracket(q, qp), b) + &self.predual.pair(qp, &self.apply(q, b));
            let diff = &lhs - &rhs;
            ck.expect_zero(
                "(c) rho(q)<q',b> = <[q,q'],b> + <q', D_q b>",
                diff.is_zero(),
                &[q.to_string(), qp.to_string(), b.to_string()],
                &diff,
            );
        }
        ck.finish()
    }

    /// `R_Δ(q1,q2) b = Δ_{q1}Δ_{q2}b − Δ_{q2}Δ_{q1}b − Δ_{[q1,q2]}b`.
    pub fn curvature_apply(&self, q1: &Section, q2: &Section, b: &Section) -> Section {
        let a = self.apply(q1, &self.apply(q2, b));
        let c = self.apply(q2, &self.apply(q1, b));
        let e = self.apply(&self.bracket.bracket(q1, q2), b);
        &(&a - &c) - &e
    }

    /// `R_Δ(q1,q2)` as a `B → B` matrix, evaluated on the `B`-frame.
    pub fn curvature(&self, q1: &Section, q2: &Section) -> Mat {
        let br = self.b_rank();
        let cols: Vec<Section> = (0..br).map(|j| self.curvature_apply(q1, q2, &Section::unit(self.ring(), br, j))).collect();
        Mat::from_columns(self.ring(), br, &cols)
    }

    /// `C∞`-linearity of the curvature in all three slots.
    pub fn check_curvature_tensorial(&self, battery: &Battery) -> CheckReport {
        let (qr, br) = (self.q_rank(), self.b_rank());
        let mut ck = Checker::new("curvature-tensorial", "curvature of a Dorfman connection is a tensor");
        let fns = battery.nontrivial_functions();
        for t in battery.tuples(&[qr, qr, br]) {
            let (q1, q2, b) = (&t[0], &t[1], &t[2]);
            let base = self.curvature_apply(q1, q2, b);
            let inputs = [q1.to_string(), q2.to_string(), b.to_string()];
            for f in &fns {
                let fb = base.scale(f);
                let d1 = &self.curvature_apply(&q1.scale(f), q2, b) - &fb;
                ck.expect_zero("R(f q1, q2) b = f R(q1,q2) b", d1.is_zero(), &inputs, &d1);
                let d2 = &self.curvature_apply(q1, &q2.scale(f), b) - &fb;
                ck.expect_zero("R(q1, f q2) b = f R(q1,q2) b", d2.is_zero(), &inputs, &d2);
                let d3 = &self.curvature_apply(q1, q2, &b.scale(f)) - &fb;
                ck.expect_zero("R(q1,q2)(f b) = f R(q1,q2) b", d3.is_zero(), &inputs, &d3);
            }
            let mat = self.curvature(q1, q2).apply(b);
            let d4 = &mat - &base;
            ck.expect_zero("materialized curvature agrees with direct evaluation", d4.is_zero(), &inputs, &d4);
        }
        ck.finish()
    }

    /// `⟨R_Δ(q1,q2) b, q3⟩` against the Jacobiator of the bracket on `Q`.
    pub fn check_curvature_vs_jacobiator(&self, battery: &Battery) -> CheckReport {
        let (qr, br) = (self.q_rank(), self.b_rank());
        let mut ck = Checker::new("curvature-jacobiator", "curvature pairs with the Jacobiator of the dull bracket");
        for t in battery.tuples(&[qr, qr, qr, br]) {
            let (q1, q2, q3, b) = (&t[0], &t[1], &t[2], &t[3]);
            let lhs = self.predual.pair(q3, &self.curvature_apply(q1, q2, b));
            let rhs = self.predual.pair(&self.bracket.jacobiator(q1, q2, q3), b);
            let diff = &lhs - &rhs;
            ck.expect_zero(
                "<R(q1,q2)b, q3> = <Jac(q1,q2,q3), b>",
                diff.is_zero(),
                &[q1.to_string(), q2.to_string(), q3.to_string(), b.to_string()],
                &diff,
            );
        }
        ck.finish()
    }

    /// `Skew_Δ(v1,v2) = pr_{E*}(⟦v1,v2⟧ + ⟦v2,v1⟧)`; canonical layout only.
    pub fn skew(&self, v1: &Section, v2: &Section) -> Section {
        let (n, r) = self.predual.layout().expect("Skew needs the canonical TM⊕E* layout");
        let s = &self.bracket.bracket(v1, v2) + &self.bracket.bracket(v2, v1);
        s.slice(n, n + r)
    }

    /// Skew is `C∞`-bilinear and the `TM` part of the symmetrized bracket vanishes.
    pub fn check_skew(&self, battery: &Battery) -> CheckReport {
        let Some((n, _)) = self.predual.layout() else {
            return CheckReport::not_applicable("skew", "Skew tensor of a Dorfman connection", "needs the canonical TM⊕E* layout");
        };
        let qr = self.q_rank();
        let mut ck = Checker::new("skew", "Skew tensor of a Dorfman connection");
        let fns = battery.nontrivial_functions();
        for t in battery.tuples(&[qr, qr]) {
            let (v1, v2) = (&t[0], &t[1]);
            let inputs = [v1.to_string(), v2.to_string()];
            let sym = &self.bracket.bracket(v1, v2) + &self.bracket.bracket(v2, v1);
            let tm = sym.slice(0, n);
            ck.expect_zero("pr_TM of the symmetrized bracket vanishes", tm.is_zero(), &inputs, &tm);
            let base = self.skew(v1, v2);
            for f in &fns {
                let diff = &self.skew(&v1.scale(f), v2) - &base.scale(f);
                ck.expect_zero("Skew(f v1, v2) = f Skew(v1, v2)", diff.is_zero(), &inputs, &diff);
            }
        }
        ck.finish()
    }

    /// `Skew_Δ ≡ 0` on frame pairs.
    pub fn skew_vanishes(&self) -> bool {
        let ring = self.ring();
        let qr = self.q_rank();
        (0..qr).all(|i| (0..qr).all(|j| self.skew(&Section::unit(ring, qr, i), &Section::unit(ring, qr, j)).is_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::battery::DEFAULT_SEED;
    use crate::symkernel::rat;

    fn ex_a() -> DorfmanConnection {
        let ring = Ring::numbered("x", 2);
        let gamma = Christoffel::parse(&ring, 1, &[&["0"], &["x1"]]).unwrap();
        standard_dorfman(&gamma)
    }

    fn s(ring: &Ring, v: &[&str]) -> Section {
        Section::parse(ring, v).unwrap()
    }

    #[test]
    fn ex_a_apply_values() {
        let delta = ex_a();
        let r = delta.ring().clone();
        // Q = [X1, X2, ξ], B = [e, θ1, θ2]
        assert_eq!(delta.apply(&s(&r, &["0", "1", "0"]), &s(&r, &["1", "0", "0"])), s(&r, &["x1", "0", "0"]));
        assert_eq!(delta.apply(&s(&r, &["0", "0", "x1"]), &s(&r, &["1", "0", "0"])), s(&r, &["0", "1", "-1*x1^2"]));
        assert!(delta.apply(&s(&r, &["x2", "x1", "3"]), &Section::zero(&r, 3)).is_zero());
    }

    #[test]
    fn ex_a_dual_bracket_value() {
        let delta = ex_a();
        let r = delta.ring().clone();
        let b = delta.bracket();
        assert_eq!(b.bracket(&s(&r, &["0", "1", "0"]), &s(&r, &["0", "0", "1"])), s(&r, &["0", "0", "-x1"]));
    }

    #[test]
    fn ex_a_axioms_and_curvature() {
        let delta = ex_a();
        let r = delta.ring().clone();
        let b = Battery::new(&r, DEFAULT_SEED);
        assert!(delta.check_axioms(&b).passed());
        assert!(delta.predual().check_compatibility(&b).passed());
        let rr = delta.curvature_apply(&s(&r, &["1", "0", "0"]), &s(&r, &["0", "1", "0"]), &s(&r, &["1", "0", "0"]));
        assert_eq!(rr, s(&r, &["1", "0", "0"]));
        assert!(delta.check_curvature_tensorial(&b).passed());
        assert!(delta.check_curvature_vs_jacobiator(&b).passed());
        assert!(!delta.bracket().check_lie(&b).passed());
    }

    #[test]
    fn curvature_never_sees_forms_under_pairing() {
        let delta = ex_a();
        let r = delta.ring().clone();
        let b = Battery::new(&r, 5);
        for t in b.tuples(&[3, 3, 3]) {
            let theta = s(&r, &["0", "x2", "x1^2"]);
            let val = delta.predual().pair(&t[2], &delta.curvature_apply(&t[0], &t[1], &theta));
            assert!(val.is_zero());
        }
    }

    #[test]
    fn roundtrip_through_dull_bracket() {
        let delta = ex_a();
        let back = DorfmanConnection::from_dull(delta.predual().clone(), delta.dual_bracket().unwrap()).unwrap();
        assert_eq!(back.symbols(), delta.symbols());
    }

    #[test]
    fn perturbed_symbol_breaks_axiom_c() {
        let delta = ex_a();
        let r = delta.ring().clone();
        // add ε*-direction junk: Δ_{∂1} ε gets an extra dx1
        let bad = delta.with_symbol(0, 0, &delta.symbol(0, 0).clone() + &s(&r, &["0", "1", "0"]));
        let rep = bad.check_axioms(&Battery::new(&r, DEFAULT_SEED));
        assert!(!rep.passed());
        assert!(rep.witnesses.iter().any(|w| w.label.starts_with("(c)")));
        assert!(rep.witnesses.iter().all(|w| w.difference != "0"));
    }

    #[test]
    fn standard_dorfman_has_no_skew() {
        let delta = ex_a();
        assert!(delta.skew_vanishes());
        assert!(delta.check_skew(&Battery::new(delta.ring(), 9)).passed());
    }

    #[test]
    fn skew_of_a_symmetric_dull_bracket() {
        // rank-1 E over a point: ⟦ε*, ε*⟧ = ε*
        let ring = Ring::numbered("x", 0);
        let pd = PreDual::canonical(&ring, 1);
        let bracket = AnchoredBracket::new(&ring, pd.anchor().clone(), vec![vec![Section::unit(&ring, 1, 0)]]).unwrap();
        let delta = DorfmanConnection::from_dull(pd, bracket).unwrap();
        let e = Section::unit(&ring, 1, 0);
        assert_eq!(delta.skew(&e, &e), Section::from_rationals(&ring, &[rat(2)]));
        assert!(delta.check_axioms(&Battery::new(&ring, 1)).passed());
    }

    #[test]
    fn forms_are_moved_by_lie_derivative() {
        let delta = ex_a();
        let r = delta.ring().clone();
        let b = Battery::new(&r, 3);
        for v in b.sections(3) {
            let theta = s(&r, &["0", "x1*x2", "x2^2"]);
            let out = delta.apply(&v, &theta);
            let expect = Section::zero(&r, 1).concat(&crate::bundle::cartan::lie_derivative_form(&v.slice(0, 2), &theta.slice(1, 3)));
            assert_eq!(out, expect);
        }
    }
}
