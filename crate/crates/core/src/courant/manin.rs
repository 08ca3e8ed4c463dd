//! The Manin pair built from an LA-Dirac triple.
//!
//! `C = (U ⊕ (A⊕T*M)) / graph(−(ρ,ρ*)|_K)` is presented on the frame
//! `u_1⊕0, …, u_p⊕0, 0⊕w_1, …, 0⊕w_q` where the `w_j` span the deterministic
//! complement `W` of `K`. A pair `u⊕σ` with `σ = κ + ω`, `κ ∈ K`, `ω ∈ W`
//! is normalized to `(u + (ρ,ρ*)κ) ⊕ ω`.

use thiserror::Error;

use super::{CourantData, CourantError};
use crate::algebroid::AnchoredBracket;
use crate::battery::Battery;
use crate::bundle::cartan::d;
use crate::bundle::subspace::{inverse, Subspace};
use crate::bundle::{Mat, Section};
use crate::dirac::{span_section, DiracError, VBTriple};
use crate::dorfman::{DorfmanConnection, DorfmanError, PreDual};
use crate::laops::{check_la_dirac, BasicOps, LaopsError, LieAlgebroidData};
use crate::report::{CheckReport, Checker};
use crate::symkernel::Poly;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ManinError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("the A-Manin pair conditions fail: {}", .0.check)]
    Conditions(Box<CheckReport>),
    #[error(transparent)]
    Courant(#[from] CourantError),
    #[error(transparent)]
    Laops(#[from] LaopsError),
    #[error(transparent)]
    Dirac(#[from] DiracError),
    #[error(transparent)]
    Dorfman(#[from] DorfmanError),
}

#[derive(Debug, Clone)]
pub struct ManinPairData {
    ops: BasicOps,
    triple: VBTriple,
    w: Vec<Section>,
    courant: CourantData,
}

/// Builds `C` from an LA-Dirac triple. Fails if the triple is not LA-Dirac
/// or if the pairing on `C` is not constant and nondegenerate.
pub fn build_manin_pair(la: &LieAlgebroidData, t: &VBTriple, battery: &Battery) -> Result<ManinPairData, ManinError> {
    let report = check_la_dirac(la, t, battery);
    if !report.passed() {
        return Err(ManinError::Conditions(Box::new(report)));
    }
    let ops = BasicOps::new(la, t.delta())?;
    let ring = la.ring();
    let w = t.k().complement_sections(ring);
    let mut m = ManinPairData { ops, triple: t.clone(), w, courant: CourantData::standard(ring) };
    let rank = m.rank();
    let frames: Vec<(Section, Section)> = (0..rank).map(|i| m.representative(&Section::unit(ring, rank, i))).collect();
    let anchor_cols: Vec<Section> = frames.iter().map(|(u, s)| m.anchor_of(u, s)).collect();
    let anchor = Mat::from_columns(ring, ring.len(), &anchor_cols);
    let pairing = Mat::from_rows(
        ring,
        frames.iter().map(|(u1, s1)| frames.iter().map(|(u2, s2)| m.pair_of(u1, s1, u2, s2)).collect()).collect(),
        rank,
    );
    let structure = frames
        .iter()
        .map(|(u1, s1)| {
            frames
                .iter()
                .map(|(u2, s2)| {
                    let (u, s) = m.formula_bracket(u1, s1, u2, s2);
                    m.normalize(&u, &s)
                })
                .collect()
        })
        .collect();
    m.courant = CourantData::new(ring, anchor, pairing, structure)?;
    Ok(m)
}

impl ManinPairData {
    pub fn courant(&self) -> &CourantData {
        &self.courant
    }

    pub fn triple(&self) -> &VBTriple {
        &self.triple
    }

    pub fn ops(&self) -> &BasicOps {
        &self.ops
    }

    /// The same presentation with another Courant structure on `C`, used to
    /// feed perturbed data to [`ManinPairData::recover_triple`].
    pub fn with_courant(&self, courant: CourantData) -> ManinPairData {
        ManinPairData { courant, ..self.clone() }
    }

    pub fn rank(&self) -> usize {
        self.triple.u().rank() + self.w.len()
    }

    fn u_rank(&self) -> usize {
        self.triple.u().rank()
    }

    /// `U ⊕ 0` inside `C`, in frame coordinates.
    pub fn u_in_c(&self) -> Subspace {
        let ring = self.ops.lie_algebroid().ring();
        let frame: Vec<Section> = (0..self.u_rank()).map(|i| Section::unit(ring, self.rank(), i)).collect();
        Subspace::from_sections(self.rank(), &frame).expect("unit frame")
    }

    /// Frame coordinates of the class of `u ⊕ σ`.
    pub fn normalize(&self, u: &Section, sigma: &Section) -> Section {
        let ring = u.ring();
        let k = self.triple.k();
        let (kc, wc) = k.coordinates(sigma);
        let kappa = span_section(k, &Section::new(ring, kc));
        let shifted = u + &self.ops.pm(&kappa);
        let (uc, _) = self.triple.u().coordinates(&shifted);
        Section::new(ring, uc).concat(&Section::new(ring, wc))
    }

    /// The normalized representative `u ⊕ σ` of frame coordinates.
    pub fn representative(&self, c: &Section) -> (Section, Section) {
        let ring = c.ring();
        let p = self.u_rank();
        let u = span_section(self.triple.u(), &c.slice(0, p));
        let b = self.ops.lie_algebroid().rank() + self.ops.lie_algebroid().base_dim();
        let sigma = Section::combination(ring, b, c.slice(p, self.rank()).comps(), &self.w);
        (u, sigma)
    }

    /// `c(u⊕σ) = pr_TM u + ρ(pr_A σ)`.
    pub fn anchor_of(&self, u: &Section, sigma: &Section) -> Section {
        let la = self.ops.lie_algebroid();
        let n = la.base_dim();
        &u.slice(0, n) + &la.rho(&sigma.slice(0, la.rank()))
    }

    /// `⟨⟨u1⊕σ1, u2⊕σ2⟩⟩ = ⟨u1,σ2⟩ + ⟨u2,σ1⟩ + ⟨σ1,(ρ,ρ*)σ2⟩`.
    pub fn pair_of(&self, u1: &Section, s1: &Section, u2: &Section, s2: &Section) -> Poly {
        let o = &self.ops;
        &(&o.pair(u1, s2) + &o.pair(u2, s1)) + &o.pair_d(s1, s2)
    }

    /// The bracket of `C` on representatives, before normalization.
    pub fn formula_bracket(&self, u1: &Section, s1: &Section, u2: &Section, s2: &Section) -> (Section, Section) {
        let o = &self.ops;
        let delta = o.delta();
        let n = o.lie_algebroid().base_dim();
        let r = o.lie_algebroid().rank();
        let u = &(&delta.bracket().bracket(u1, u2) + &o.bas_sigma_q(s1, u2)) - &o.bas_sigma_q(s2, u1);
        let form = Section::zero(u1.ring(), r).concat(&d(&o.pair(u2, s1), n));
        let s = &(&(&o.dlike(s1, s2) + &delta.apply(u1, s2)) - &delta.apply(u2, s1)) + &form;
        (u, s)
    }

    fn core_section(&self, sigma: &Section) -> Section {
        let zero = Section::zero(sigma.ring(), self.ops.lie_algebroid().base_dim() + self.ops.lie_algebroid().rank());
        self.normalize(&zero, sigma)
    }

    fn u_section(&self, u: &Section) -> Section {
        let b = self.ops.lie_algebroid().rank() + self.ops.lie_algebroid().base_dim();
        self.normalize(u, &Section::zero(u.ring(), b))
    }

    /// Normalization, the graph, well-definedness of anchor, pairing and
    /// bracket, agreement of the frame presentation with the formula on
    /// arbitrary representatives, and `𝒟f = 0⊕(0,df)`.
    pub fn check_presentation(&self, battery: &Battery) -> CheckReport {
        let mut ck = Checker::new("manin-presentation", "quotient presentation of C");
        let ring = self.ops.lie_algebroid().ring().clone();
        let la = self.ops.lie_algebroid();
        let (n, r) = (la.base_dim(), la.rank());
        let (u, k) = (self.triple.u(), self.triple.k());
        let graph: Vec<(Section, Section)> = k.frame_sections(&ring).into_iter().map(|kk| (-&self.ops.pm(&kk), kk)).collect();
        for (gu, gk) in &graph {
            let inputs = [gu.to_string(), gk.to_string()];
            let c = self.normalize(gu, gk);
            ck.expect_zero("graph elements normalize to zero", c.is_zero(), &inputs, &c);
            let a = self.anchor_of(gu, gk);
            ck.expect_zero("anchor kills the graph", a.is_zero(), &inputs, &a);
        }
        let pairs: Vec<(Section, Section)> =
            battery.tuples(&[u.rank(), r + n]).into_iter().map(|t| (span_section(u, &t[0]), t[1].clone())).collect();
        for (pu, ps) in &pairs {
            let inputs = [pu.to_string(), ps.to_string()];
            let c = self.normalize(pu, ps);
            let (ru, rs) = self.representative(&c);
            let again = &self.normalize(&ru, &rs) - &c;
            ck.expect_zero("normalization is idempotent", again.is_zero(), &inputs, &again);
            for (gu, gk) in &graph {
                let p = self.pair_of(gu, gk, pu, ps);
                ck.expect_zero("pairing kills the graph", p.is_zero(), &inputs, &p);
                for (x, y) in [((gu, gk), (pu, ps)), ((pu, ps), (gu, gk))] {
                    let (bu, bs) = self.formula_bracket(x.0, x.1, y.0, y.1);
                    let cls = self.normalize(&bu, &bs);
                    ck.expect_zero("bracket with the graph is zero in C", cls.is_zero(), &inputs, &cls);
                }
            }
        }
        for t in battery.tuples(&[u.rank(), r + n, u.rank(), r + n]) {
            let (u1, s1, u2, s2) = (span_section(u, &t[0]), &t[1], span_section(u, &t[2]), &t[3]);
            let (bu, bs) = self.formula_bracket(&u1, s1, &u2, s2);
            let lhs = self.normalize(&bu, &bs);
            let rhs = self.courant.bracket(&self.normalize(&u1, s1), &self.normalize(&u2, s2));
            let diff = &lhs - &rhs;
            ck.expect_zero(
                "bracket formula agrees with the frame presentation",
                diff.is_zero(),
                &[u1.to_string(), s1.to_string(), u2.to_string(), s2.to_string()],
                &diff,
            );
        }
        for f in battery.functions() {
            let expected = self.core_section(&Section::zero(&ring, r).concat(&d(&f, n)));
            let diff = &self.courant.big_d(&f) - &expected;
            ck.expect_zero("D f = 0 + (0, df)", diff.is_zero(), &[f.to_string()], &diff);
        }
        ck.finish()
    }

    /// Exactness of `0 → U → C → U* → 0`, rank count and nondegeneracy.
    pub fn check_c_iso(&self) -> CheckReport {
        let mut ck = Checker::new("c-iso", "C is isomorphic to U plus its dual");
        let p = self.u_rank();
        let rank = self.rank();
        if rank != 2 * p {
            ck.fail("rank C = 2 rank U", &[], format!("rank C = {rank}, rank U = {p}"));
        }
        let g = self.courant.pairing_matrix();
        // π(e_i)(u_j) = ⟨⟨e_i, u_j⊕0⟩⟩: the columns over U
        let pi: Vec<Vec<_>> = (0..rank).map(|i| (0..p).map(|j| g.entries[i][j].as_constant().unwrap_or_default()).collect()).collect();
        for (i, row) in pi.iter().enumerate().take(p) {
            if row.iter().any(|x| !num_traits::Zero::is_zero(x)) {
                ck.fail("pi o iota = 0", &[format!("u_{}", i + 1)], format!("{row:?}"));
            }
        }
        let pi_rank = crate::bundle::subspace::rank(&pi, p);
        if pi_rank != p {
            ck.fail("pi is surjective", &[], format!("rank of pi = {pi_rank}, rank U = {p}"));
        }
        let det = self.courant.pairing_determinant();
        if num_traits::Zero::is_zero(&det) {
            ck.fail("pairing is nondegenerate", &[], "Gram determinant 0".into());
        } else {
            ck.note(format!("Gram determinant {det}"));
        }
        ck.finish()
    }

    /// `(ρ,ρ*)(U°) ⊆ U` and `⟦0⊕σ1, 0⊕σ2⟧ = 0⊕[σ1,σ2]_D`.
    pub fn check_manin_conditions(&self, battery: &Battery) -> CheckReport {
        let mut ck = Checker::new("a-manin", "A-Manin pair conditions (a) and (c)");
        let ring = self.ops.lie_algebroid().ring();
        let la = self.ops.lie_algebroid();
        let b = la.rank() + la.base_dim();
        for kk in self.triple.u_annihilator().frame_sections(ring) {
            let res = self.triple.u().residual(&self.ops.pm(&kk));
            ck.expect_zero("(a) (rho,rho*)(U°) in U", res.is_zero(), &[kk.to_string()], &res);
        }
        for t in battery.tuples(&[b, b]) {
            let (s1, s2) = (&t[0], &t[1]);
            let lhs = self.courant.bracket(&self.core_section(s1), &self.core_section(s2));
            let rhs = self.core_section(&self.ops.dlike(s1, s2));
            let diff = &lhs - &rhs;
            ck.expect_zero("(c) [[0+s1, 0+s2]] = 0+[s1,s2]_D", diff.is_zero(), &[s1.to_string(), s2.to_string()], &diff);
        }
        ck.finish()
    }

    /// Courant axioms of `C`, `U⊕0` Dirac in `C`, the presentation checks,
    /// exactness and the A-Manin conditions.
    pub fn check_manin_pair(&self, battery: &Battery) -> CheckReport {
        let parts = vec![
            self.courant.check_axioms(battery),
            self.courant.check_dirac(&self.u_in_c(), battery),
            self.check_presentation(battery),
            self.check_c_iso(),
            self.check_manin_conditions(battery),
        ];
        CheckReport::combine("manin-pair", "the Courant algebroid of an LA-Dirac triple and its Dirac structure U", parts)
    }

    /// Reads the triple back from the Courant structure of `C` alone: the
    /// bracket on `U` is extended by zero on the fixed complement of `U` in
    /// `TM⊕A*`, and `Δ` is the Dorfman connection dual to that extension.
    pub fn recover_triple(&self, battery: &Battery) -> Result<VBTriple, ManinError> {
        let conditions = self.check_manin_conditions(battery);
        if !conditions.passed() {
            return Err(ManinError::Conditions(Box::new(conditions)));
        }
        let la = self.ops.lie_algebroid();
        let ring = la.ring();
        let (n, r) = (la.base_dim(), la.rank());
        let q = n + r;
        let u = self.triple.u();
        let p = u.rank();
        let mut frame_table = vec![vec![Section::zero(ring, q); q]; q];
        for i in 0..p {
            for j in 0..p {
                let c = self.courant.bracket(&Section::unit(ring, self.rank(), i), &Section::unit(ring, self.rank(), j));
                let (bu, bs) = self.representative(&c);
                if !bs.is_zero() {
                    let mut report = CheckReport::new("a-manin", "A-Manin pair conditions", crate::report::Status::Fail);
                    report.notes.push(format!("[[u_{}, u_{}]] leaves U by {bs}", i + 1, j + 1));
                    return Err(ManinError::Conditions(Box::new(report)));
                }
                frame_table[i][j] = bu;
            }
        }
        // columns of P: the U frame, then the complement of U
        let basis: Vec<Vec<_>> = u.frame().iter().chain(u.complement().iter()).cloned().collect();
        let p_mat: Vec<Vec<_>> = (0..q).map(|row| basis.iter().map(|col| col[row].clone()).collect()).collect();
        let p_inv = inverse(&p_mat).expect("frame plus complement is a basis");
        let mut table = vec![vec![Section::zero(ring, q); q]; q];
        for (a, row) in table.iter_mut().enumerate() {
            for (bb, slot) in row.iter_mut().enumerate() {
                let mut acc = Section::zero(ring, q);
                for k in 0..p {
                    for l in 0..p {
                        let c = &p_inv[k][a] * &p_inv[l][bb];
                        if !num_traits::Zero::is_zero(&c) && !frame_table[k][l].is_zero() {
                            acc = &acc + &frame_table[k][l].scale_rat(&c);
                        }
                    }
                }
                *slot = acc;
            }
        }
        let mut anchor = Mat::zero(ring, n, q);
        for i in 0..n {
            anchor.entries[i][i] = ring.one();
        }
        let bracket = AnchoredBracket::new(ring, anchor, table).map_err(DorfmanError::from)?;
        let delta = DorfmanConnection::from_dull(PreDual::canonical(ring, r), bracket)?;
        Ok(VBTriple::new(delta, u.clone(), self.triple.k().clone())?)
    }

    /// Recovers the triple from `C` and compares it with the input: the
    /// recovered `Δ` is `(U,K)`-equivalent, the brackets on `U` agree, and
    /// `⟦u⊕0, 0⊕τ⟧ = (−∇^bas_τ u)⊕Δ_u τ`.
    pub fn roundtrip_check(&self, battery: &Battery) -> CheckReport {
        let name = "roundtrip";
        let anchor = "LA-Dirac triple to A-Manin pair and back";
        let recovered = match self.recover_triple(battery) {
            Ok(t) => t,
            Err(ManinError::Conditions(report)) => {
                return CheckReport::combine(name, anchor, vec![*report]);
            }
            Err(e) => return CheckReport::error(name, anchor, e.to_string()),
        };
        let mut parts = vec![self.triple.check_equivalent(recovered.delta(), battery)];
        match self.triple.check_bracket_well_defined_on_u(recovered.delta(), battery) {
            Ok(r) => parts.push(r),
            Err(e) => parts.push(CheckReport::error("brackets-on-u", "bracket on U is independent of the representative", e.to_string())),
        }
        let mut ck = Checker::new("recovery-bracket", "[[u+0, 0+t]] = (-nabla_t u) + D_u t");
        let u = self.triple.u();
        let la = self.ops.lie_algebroid();
        let b = la.rank() + la.base_dim();
        for t in battery.tuples(&[u.rank(), b]) {
            let (uu, tau) = (span_section(u, &t[0]), &t[1]);
            let lhs = self.courant.bracket(&self.u_section(&uu), &self.core_section(tau));
            let rhs = self.normalize(&-&self.ops.bas_sigma_q(tau, &uu), &self.ops.delta().apply(&uu, tau));
            let diff = &lhs - &rhs;
            ck.expect_zero("[[u+0, 0+t]] = (-nabla_t u) + D_u t", diff.is_zero(), &[uu.to_string(), tau.to_string()], &diff);
            let (_, read) = self.representative(&lhs);
            let res = self.triple.k().residual(&(&recovered.delta().apply(&uu, tau) - &read));
            ck.expect_zero("recovered D_u t agrees with C modulo K", res.is_zero(), &[uu.to_string(), tau.to_string()], &res);
        }
        parts.push(ck.finish());
        CheckReport::combine(name, anchor, parts)
    }

    /// For `A = TM` with identity anchor and `U = graph(−σ*)`, `K = graph(σ)`:
    /// `Π(u⊕(a,θ)) = (X + a, θ − σa)` with `u = (X, −σ*X)` and
    /// `Θ(X,θ) = (X,−σ*X)⊕(0,θ)` are inverse isomorphisms onto the standard
    /// Courant algebroid.
    pub fn check_standard_isomorphism(&self, sigma: &Mat, battery: &Battery) -> CheckReport {
        let name = "standard-iso";
        let anchor = "C is isomorphic to the standard Courant algebroid";
        let la = self.ops.lie_algebroid();
        let ring = la.ring().clone();
        let n = la.base_dim();
        if la.rank() != n || la.algebroid().anchor() != &Mat::identity(&ring, n) {
            return CheckReport::not_applicable(name, anchor, "needs A = TM with the identity anchor");
        }
        let sigma_star = |x: &Section| sigma.transpose().apply(x);
        let graph_u: Vec<Section> = (0..n).map(|i| Section::unit(&ring, n, i)).map(|x| x.concat(&-&sigma_star(&x))).collect();
        let mut ck = Checker::new(name, anchor);
        let expected_u = Subspace::from_sections(2 * n, &graph_u);
        if !matches!(&expected_u, Ok(s) if s.same_as(self.triple.u())) {
            ck.fail("U = graph(-sigma*)", &[], "U differs from the graph".into());
            return ck.finish();
        }
        let std = CourantData::standard(&ring);
        let pi_raw = |u: &Section, s: &Section| -> Section {
            let a = s.slice(0, n);
            (&u.slice(0, n) + &a).concat(&(&s.slice(n, 2 * n) - &sigma.apply(&a)))
        };
        let pi = |c: &Section| -> Section {
            let (u, s) = self.representative(c);
            pi_raw(&u, &s)
        };
        let theta = |e: &Section| -> Section {
            let x = e.slice(0, n);
            let u = x.concat(&-&sigma_star(&x));
            self.normalize(&u, &Section::zero(&ring, n).concat(&e.slice(n, 2 * n)))
        };
        for kk in self.triple.k().frame_sections(&ring) {
            let g = pi_raw(&-&self.ops.pm(&kk), &kk);
            ck.expect_zero("Pi kills the graph", g.is_zero(), &[kk.to_string()], &g);
        }
        for e in battery.sections(2 * n) {
            let diff = &pi(&theta(&e)) - &e;
            ck.expect_zero("Pi o Theta = id", diff.is_zero(), &[e.to_string()], &diff);
        }
        for c in battery.sections(self.rank()) {
            let diff = &theta(&pi(&c)) - &c;
            ck.expect_zero("Theta o Pi = id", diff.is_zero(), &[c.to_string()], &diff);
            let diff = &self.courant.rho(&c) - &std.rho(&pi(&c));
            ck.expect_zero("anchor(c) = pr_TM Pi(c)", diff.is_zero(), &[c.to_string()], &diff);
        }
        for t in battery.tuples(&[self.rank(), self.rank()]) {
            let (c1, c2) = (&t[0], &t[1]);
            let inputs = [c1.to_string(), c2.to_string()];
            let diff = &self.courant.pair(c1, c2) - &std.pair(&pi(c1), &pi(c2));
            ck.expect_zero("<<c1,c2>> = <Pi c1, Pi c2>", diff.is_zero(), &inputs, &diff);
            let diff = &pi(&self.courant.bracket(c1, c2)) - &std.bracket(&pi(c1), &pi(c2));
            ck.expect_zero("Pi[[c1,c2]] = [Pi c1, Pi c2]", diff.is_zero(), &inputs, &diff);
        }
        ck.finish()
    }
}
