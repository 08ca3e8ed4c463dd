//! Generator calculus of the Lie algebroid `TA⊕T*A → TM⊕A*`.
//!
//! Sections over the total space of `Q = TM⊕A*` form a free module on the
//! linear sections `ε̃_k` of the `A`-frame and the core sections `β_j†` of the
//! `A⊕T*M`-frame, so an element is a list of `r + (r+n)` coefficient
//! polynomials in the base and fiber coordinates. Brackets and anchor are
//! fixed on this basis and extended by the Leibniz rule.
//!
//! For non-frame `a` the linear section is `ã = Σ a_m ε̃_m + Φ_a†` with
//! `Φ_a(X,ξ) = (X(a), −Σ_m ξ_m da_m)`. On the tangent side `T(fa) = f·Ta +
//! (df·a)†`; on the cotangent side `d(q*f·ℓ_a) = q*f·dℓ_a + ℓ_a·q*df`, and the
//! identification of `T*A*` with `T*A` is minus the identity on the core
//! `T*M`, which produces the sign.

use super::TotalPatch;
use crate::battery::Battery;
use crate::bundle::cartan::{apply_vf, vf_bracket};
use crate::bundle::{Mat, Section};
use crate::dorfman::DorfmanConnection;
use crate::laops::{BasicOps, LaopsError, LieAlgebroidData};
use crate::report::{CheckReport, Checker};
use crate::symkernel::Poly;

#[derive(Debug, Clone)]
pub struct TaAlgebra {
    ops: BasicOps,
    tp: TotalPatch,
    n: usize,
    r: usize,
    anchors: Vec<Section>,
    table: Vec<Vec<Section>>,
}

impl TaAlgebra {
    pub fn new(la: &LieAlgebroidData, delta: &DorfmanConnection) -> Result<TaAlgebra, LaopsError> {
        let ops = BasicOps::new(la, delta)?;
        let (n, r) = (la.base_dim(), la.rank());
        let tp = TotalPatch::new(la.ring(), n + r);
        let mut alg = TaAlgebra { ops, tp, n, r, anchors: Vec::new(), table: Vec::new() };
        let base = la.ring();
        let b = r + n;
        let g = r + b;
        let e = |k| Section::unit(base, r, k);
        let beta = |j| Section::unit(base, b, j);
        let mut anchors = Vec::with_capacity(g);
        for k in 0..r {
            let z: Vec<Poly> = (0..n + r).map(|c| alg.ell_b(&alg.ops.lie_on_b(&e(k), &beta(alg.partner(c))))).collect();
            anchors.push(alg.tp.horizontal(&la.rho(&e(k))).slice(0, n).concat(&Section::new(alg.tp.ring(), z)));
        }
        for j in 0..b {
            anchors.push(alg.tp.vertical(&la.pm(&beta(j))));
        }
        let zero = Section::zero(alg.tp.ring(), g);
        let mut table = vec![vec![zero.clone(); g]; g];
        for k in 0..r {
            for l in 0..r {
                table[k][l] = alg.tilde(&la.algebroid().bracket(&e(k), &e(l)));
            }
            for j in 0..b {
                let v = alg.dagger(&alg.ops.lie_on_b(&e(k), &beta(j)));
                table[r + j][k] = -&v;
                table[k][r + j] = v;
            }
        }
        alg.anchors = anchors;
        alg.table = table;
        Ok(alg)
    }

    pub fn total(&self) -> &TotalPatch {
        &self.tp
    }

    pub fn ops(&self) -> &BasicOps {
        &self.ops
    }

    pub fn generator_count(&self) -> usize {
        self.r + self.r + self.n
    }

    /// Fiber coordinate `z_c` of `Q` is `ℓ` of this `B`-frame element.
    fn partner(&self, c: usize) -> usize {
        if c < self.n {
            self.r + c
        } else {
            c - self.n
        }
    }

    /// `ℓ_σ` on the total space of `Q`.
    pub fn ell_b(&self, sigma: &Section) -> Poly {
        self.tp.ell(&sigma.slice(self.r, self.r + self.n).concat(&sigma.slice(0, self.r)))
    }

    /// `σ†`.
    pub fn dagger(&self, sigma: &Section) -> Section {
        Section::zero(self.tp.ring(), self.r).concat(&self.tp.pull_section(sigma))
    }

    /// `Φ†` for `Φ: Q → B` given as a `(r+n) × (n+r)` matrix.
    pub fn hom_dagger(&self, phi: &Mat) -> Section {
        let cols: Vec<Section> = (0..phi.cols).map(|c| phi.column(c)).collect();
        Section::zero(self.tp.ring(), self.r).concat(&self.tp.tautological(&cols))
    }

    fn phi_of(&self, a: &Section) -> Mat {
        let (n, r) = (self.n, self.r);
        let mut m = Mat::zero(self.ops.lie_algebroid().ring(), r + n, n + r);
        for mm in 0..r {
            for i in 0..n {
                let da = a.get(mm).partial(i);
                m.entries[mm][i] = da.clone();
                m.entries[r + i][n + mm] = -da;
            }
        }
        m
    }

    /// `ã`.
    pub fn tilde(&self, a: &Section) -> Section {
        let lin = self.tp.pull_section(a).concat(&Section::zero(self.tp.ring(), self.r + self.n));
        &lin + &self.hom_dagger(&self.phi_of(a))
    }

    /// `Σ_a = ã − (Ω_· a)†`.
    pub fn sigma_a(&self, a: &Section) -> Section {
        &self.tilde(a) - &self.hom_dagger(&self.q_matrix(|v| self.ops.omega(v, a)))
    }

    /// A `Q → B` map materialized on the `Q`-frame.
    pub fn q_matrix(&self, f: impl Fn(&Section) -> Section) -> Mat {
        let base = self.ops.lie_algebroid().ring();
        let q = self.n + self.r;
        let cols: Vec<Section> = (0..q).map(|c| f(&Section::unit(base, q, c))).collect();
        Mat::from_columns(base, self.r + self.n, &cols)
    }

    /// `Θ(S)`.
    pub fn anchor(&self, s: &Section) -> Section {
        let mut acc = Section::zero(self.tp.ring(), self.tp.dim());
        for (c, th) in s.comps().iter().zip(&self.anchors) {
            if !c.is_zero() {
                acc = &acc + &th.scale(c);
            }
        }
        acc
    }

    /// `[S1, S2]` by the Leibniz rule from the basis table.
    pub fn bracket(&self, s1: &Section, s2: &Section) -> Section {
        let ring = self.tp.ring();
        let g = self.generator_count();
        let mut acc = Section::zero(ring, g);
        for (a, f) in s1.comps().iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            for (b, h) in s2.comps().iter().enumerate() {
                if !h.is_zero() && !self.table[a][b].is_zero() {
                    acc = &acc + &self.table[a][b].scale(&(f * h));
                }
            }
        }
        let th1 = self.anchor(s1);
        let th2 = self.anchor(s2);
        let d2 = Section::new(ring, s2.comps().iter().map(|h| apply_vf(&th1, h)).collect());
        let d1 = Section::new(ring, s1.comps().iter().map(|f| apply_vf(&th2, f)).collect());
        &(&acc + &d2) - &d1
    }

    /// The linear vector field on `Q` of a `Q`-connection-like operator:
    /// `ρ(a)` horizontally and `−Σ_c z_c D(q_c)` vertically.
    pub fn hat(&self, a: &Section, op: impl Fn(&Section) -> Section) -> Section {
        let base = self.ops.lie_algebroid().ring();
        let q = self.n + self.r;
        let cols: Vec<Section> = (0..q).map(|c| op(&Section::unit(base, q, c))).collect();
        let horizontal = self.tp.pull_section(&self.ops.lie_algebroid().rho(a));
        horizontal.concat(&-&self.tp.tautological(&cols))
    }

    fn unit(&self, i: usize) -> Section {
        Section::unit(self.tp.ring(), self.generator_count(), i)
    }

    fn jacobiator(&self, a: &Section, b: &Section, c: &Section) -> Section {
        let x = self.bracket(a, &self.bracket(b, c));
        let y = self.bracket(&self.bracket(a, b), c);
        let z = self.bracket(b, &self.bracket(a, c));
        &(&x - &y) - &z
    }

    /// Jacobi identity and anchor compatibility of the generator table, on
    /// basis elements and on basis elements times fiber coordinates.
    pub fn check_table(&self) -> CheckReport {
        let mut ck = Checker::new("generator-table", "bracket and anchor on the generators");
        let g = self.generator_count();
        let units: Vec<Section> = (0..g).map(|i| self.unit(i)).collect();
        for (i, a) in units.iter().enumerate() {
            for (j, b) in units.iter().enumerate() {
                let inputs = [format!("g{}", i + 1), format!("g{}", j + 1)];
                let lhs = self.anchor(&self.bracket(a, b));
                let diff = &lhs - &vf_bracket(&self.anchor(a), &self.anchor(b));
                ck.expect_zero("anchor of bracket = bracket of anchors", diff.is_zero(), &inputs, &diff);
                for (k, c) in units.iter().enumerate().skip(j) {
                    let jac = self.jacobiator(a, b, c);
                    ck.expect_zero("Jacobi identity", jac.is_zero(), &[inputs[0].clone(), inputs[1].clone(), format!("g{}", k + 1)], &jac);
                }
            }
        }
        let dim = self.tp.dim();
        let base_n = self.n;
        let multipliers: Vec<Poly> =
            (base_n..dim).map(|c| self.tp.ring().var(c)).chain((0..base_n).map(|c| self.tp.ring().var(c))).collect();
        for f in multipliers.iter().take(3) {
            for (i, a) in units.iter().enumerate() {
                for (j, b) in units.iter().enumerate() {
                    let fa = a.scale(f);
                    let lhs = self.anchor(&self.bracket(&fa, b));
                    let diff = &lhs - &vf_bracket(&self.anchor(&fa), &self.anchor(b));
                    ck.expect_zero(
                        "anchor of bracket = bracket of anchors",
                        diff.is_zero(),
                        &[format!("{f}*g{}", i + 1), format!("g{}", j + 1)],
                        &diff,
                    );
                    let c = &units[(i + j) % g];
                    let jac = self.jacobiator(&fa, b, c);
                    ck.expect_zero(
                        "Jacobi identity",
                        jac.is_zero(),
                        &[format!("{f}*g{}", i + 1), format!("g{}", j + 1), format!("g{}", (i + j) % g + 1)],
                        &jac,
                    );
                }
            }
        }
        ck.finish()
    }

    fn rank_one(&self, s: &Section, tau: &Section) -> Mat {
        let base = self.ops.lie_algebroid().ring();
        let q = self.n + self.r;
        let coeffs: Vec<Poly> = (0..q).map(|c| s.get(self.partner(c)).clone()).collect();
        let cols: Vec<Section> = coeffs.iter().map(|c| tau.scale(c)).collect();
        Mat::from_columns(base, self.r + self.n, &cols)
    }

    fn lie_on_hom(&self, a: &Section, phi: &Mat) -> Mat {
        self.q_matrix(|v| &self.ops.lie_on_b(a, &phi.apply(v)) - &phi.apply(&self.ops.lie_on_q(a, v)))
    }

    /// The bracket and anchor identities for general `ã`, `σ†`, `Φ†`.
    pub fn check_structure(&self, battery: &Battery) -> CheckReport {
        let mut ck = Checker::new("structure-identities", "brackets and anchors of linear, core and Hom sections");
        let (n, r) = (self.n, self.r);
        let b = r + n;
        let la = self.ops.lie_algebroid();
        let pm = la.pair_map();
        let homs: Vec<Mat> = battery.tuples(&[b, b]).iter().step_by(5).take(8).map(|t| self.rank_one(&t[0], &t[1])).collect();
        if r > 0 {
            for t in battery.tuples(&[r, r]) {
                let (a, c) = (&t[0], &t[1]);
                let diff = &self.bracket(&self.tilde(a), &self.tilde(c)) - &self.tilde(&la.algebroid().bracket(a, c));
                ck.expect_zero("[a~, b~] = [a,b]~", diff.is_zero(), &[a.to_string(), c.to_string()], &diff);
            }
            for t in battery.tuples(&[r, b]) {
                let (a, s) = (&t[0], &t[1]);
                let inputs = [a.to_string(), s.to_string()];
                let diff = &self.bracket(&self.tilde(a), &self.dagger(s)) - &self.dagger(&self.ops.lie_on_b(a, s));
                ck.expect_zero("[a~, s+] = (L_a s)+", diff.is_zero(), &inputs, &diff);
            }
            for a in battery.sections(r) {
                let diff = &self.anchor(&self.tilde(&a)) - &self.hat(&a, |v| self.ops.lie_on_q(&a, v));
                ck.expect_zero("Theta(a~) = hat(L_a)", diff.is_zero(), &[a.to_string()], &diff);
                for phi in &homs {
                    let diff = &self.bracket(&self.tilde(&a), &self.hom_dagger(phi)) - &self.hom_dagger(&self.lie_on_hom(&a, phi));
                    ck.expect_zero("[a~, Phi+] = (L_a Phi)+", diff.is_zero(), &[a.to_string(), format!("{:?}", phi.entries)], &diff);
                }
            }
        }
        for t in battery.tuples(&[b, b]) {
            let (s, tau) = (&t[0], &t[1]);
            let c = self.bracket(&self.dagger(s), &self.dagger(tau));
            ck.expect_zero("[s+, t+] = 0", c.is_zero(), &[s.to_string(), tau.to_string()], &c);
        }
        for s in battery.sections(b) {
            let diff = &self.anchor(&self.dagger(&s)) - &self.tp.vertical(&la.pm(&s));
            ck.expect_zero("Theta(s+) = ((rho,rho*)s)^", diff.is_zero(), &[s.to_string()], &diff);
            for phi in &homs {
                let diff = &self.bracket(&self.dagger(&s), &self.hom_dagger(phi)) - &self.dagger(&phi.apply(&la.pm(&s)));
                ck.expect_zero("[s+, Phi+] = Phi((rho,rho*)s)+", diff.is_zero(), &[s.to_string()], &diff);
            }
        }
        for (i, phi) in homs.iter().enumerate() {
            let lifted = pm.compose(phi);
            let cols: Vec<Section> = (0..lifted.cols).map(|c| lifted.column(c)).collect();
            let expected = Section::zero(self.tp.ring(), n).concat(&self.tp.tautological(&cols));
            let diff = &self.anchor(&self.hom_dagger(phi)) - &expected;
            ck.expect_zero("Theta(Phi+) = ((rho,rho*) Phi)^", diff.is_zero(), &[format!("Phi{i}")], &diff);
            for (j, psi) in homs.iter().enumerate() {
                let expected = &psi.compose(pm).compose(phi) - &phi.compose(pm).compose(psi);
                let diff = &self.bracket(&self.hom_dagger(phi), &self.hom_dagger(psi)) - &self.hom_dagger(&expected);
                ck.expect_zero("[Phi+, Psi+] = (Psi pm Phi - Phi pm Psi)+", diff.is_zero(), &[format!("Phi{i}"), format!("Phi{j}")], &diff);
            }
        }
        ck.finish()
    }

    /// The five identities expressing the structure through `Σ_a`, `σ†`,
    /// `∇^bas` and `R^bas_Δ`.
    pub fn check_rep_up_to_hom(&self, battery: &Battery) -> CheckReport {
        let (n, r) = (self.n, self.r);
        let b = r + n;
        let la = self.ops.lie_algebroid();
        let mut one = Checker::new("rep-1", "[S_a, S_b] = S_[a,b] - R^bas(a,b)+");
        let mut two = Checker::new("rep-2", "[S_a, s+] = (D^bas_a s)+");
        let mut three = Checker::new("rep-3", "[s1+, s2+] = 0");
        let mut four = Checker::new("rep-4", "Theta(S_a) = hat(D^bas_a)");
        let mut five = Checker::new("rep-5", "Theta(s+) = ((rho,rho*)s)^");
        if r > 0 {
            for t in battery.tuples(&[r, r]) {
                let (a, c) = (&t[0], &t[1]);
                let rbas = self.q_matrix(|v| self.ops.r_bas(a, c, v));
                let rhs = &self.sigma_a(&la.algebroid().bracket(a, c)) - &self.hom_dagger(&rbas);
                let diff = &self.bracket(&self.sigma_a(a), &self.sigma_a(c)) - &rhs;
                one.expect_zero("[S_a, S_b] = S_[a,b] - R^bas(a,b)+", diff.is_zero(), &[a.to_string(), c.to_string()], &diff);
            }
            for t in battery.tuples(&[r, b]) {
                let (a, s) = (&t[0], &t[1]);
                let diff = &self.bracket(&self.sigma_a(a), &self.dagger(s)) - &self.dagger(&self.ops.bas_b(a, s));
                two.expect_zero("[S_a, s+] = (D^bas_a s)+", diff.is_zero(), &[a.to_string(), s.to_string()], &diff);
            }
            for a in battery.sections(r) {
                let diff = &self.anchor(&self.sigma_a(&a)) - &self.hat(&a, |v| self.ops.bas_q(&a, v));
                four.expect_zero("Theta(S_a) = hat(D^bas_a)", diff.is_zero(), &[a.to_string()], &diff);
            }
        }
        for t in battery.tuples(&[b, b]) {
            let c = self.bracket(&self.dagger(&t[0]), &self.dagger(&t[1]));
            three.expect_zero("[s1+, s2+] = 0", c.is_zero(), &[t[0].to_string(), t[1].to_string()], &c);
        }
        for s in battery.sections(b) {
            let diff = &self.anchor(&self.dagger(&s)) - &self.tp.vertical(&la.pm(&s));
            five.expect_zero("Theta(s+) = ((rho,rho*)s)^", diff.is_zero(), &[s.to_string()], &diff);
        }
        CheckReport::combine(
            "rep-up-to-hom",
            "the structure in terms of basic connections and basic curvature",
            vec![one.finish(), two.finish(), three.finish(), four.finish(), five.finish()],
        )
    }
}

/// Generator-table consistency, the general structure identities and the
/// representation-up-to-homotopy identities.
pub fn ta_generator_check(la: &LieAlgebroidData, delta: &DorfmanConnection, battery: &Battery) -> CheckReport {
    let name = "ta-generators";
    let anchor = "the Lie algebroid TA+T*A over TM+A*";
    match TaAlgebra::new(la, delta) {
        Ok(alg) => {
            CheckReport::combine(name, anchor, vec![alg.check_table(), alg.check_structure(battery), alg.check_rep_up_to_hom(battery)])
        }
        Err(e) => CheckReport::error(name, anchor, e.to_string()),
    }
}
