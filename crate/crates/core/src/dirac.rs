//! VB-triples `(U, K, [Δ])` over a vector bundle `E`, with `U ⊆ TM⊕E*` and
//! `K ⊆ E⊕T*M` given by constant frames.

use thiserror::Error;

use crate::battery::Battery;
use crate::bundle::subspace::{Subspace, SubspaceError};
use crate::bundle::Section;
use crate::dorfman::{DorfmanConnection, DorfmanError};
use crate::report::{CheckReport, Checker};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiracError {
    #[error("the Dorfman connection must use the canonical TM⊕E* / E⊕T*M layout")]
    NotCanonical,
    #[error("{which} lives in a bundle of rank {found}, expected {expected}")]
    Rank { which: &'static str, found: usize, expected: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Dorfman(#[from] DorfmanError),
}

/// A section of a subbundle, written in ambient coordinates from its
/// coordinates along the constant frame.
pub fn span_section(sub: &Subspace, coords: &Section) -> Section {
    let ring = coords.ring();
    Section::combination(ring, sub.dim(), coords.comps(), &sub.frame_sections(ring))
}

/// Battery of sections of a constant subbundle.
pub fn sub_sections(sub: &Subspace, battery: &Battery) -> Vec<Section> {
    battery.sections(sub.rank()).iter().map(|c| span_section(sub, c)).collect()
}

#[derive(Debug, Clone)]
pub struct VBTriple {
    delta: DorfmanConnection,
    u: Subspace,
    k: Subspace,
    n: usize,
    r: usize,
}

impl VBTriple {
    pub fn new(delta: DorfmanConnection, u: Subspace, k: Subspace) -> Result<VBTriple, DiracError> {
        let (n, r) = delta.predual().layout().ok_or(DiracError::NotCanonical)?;
        if u.dim() != n + r {
            return Err(DiracError::Rank { which: "U", found: u.dim(), expected: n + r });
        }
        if k.dim() != n + r {
            return Err(DiracError::Rank { which: "K", found: k.dim(), expected: n + r });
        }
        Ok(VBTriple { delta, u, k, n, r })
    }

    pub fn delta(&self) -> &DorfmanConnection {
        &self.delta
    }

    pub fn u(&self) -> &Subspace {
        &self.u
    }

    pub fn k(&self) -> &Subspace {
        &self.k
    }

    pub fn base_dim(&self) -> usize {
        self.n
    }

    pub fn fiber_rank(&self) -> usize {
        self.r
    }

    /// `U°` inside `E⊕T*M`.
    pub fn u_annihilator(&self) -> Subspace {
        self.u.annihilator_right(self.delta.predual().pairing_matrix()).expect("canonical pairing is constant")
    }

    /// The same triple with another representative of `[Δ]`.
    pub fn with_delta(&self, delta: DorfmanConnection) -> Result<VBTriple, DiracError> {
        VBTriple::new(delta, self.u.clone(), self.k.clone())
    }

    /// A representative obtained by adding `shift` (a section of `K`) to
    /// `Δ_q (ε_j, 0)` for every `Q`-frame `q`; the bracket is recomputed.
    pub fn shifted_representative(&self, j: usize, shift: &Section) -> Result<DorfmanConnection, DiracError> {
        assert!(j < self.r, "shift index must address an E-frame");
        let mut symbols = self.delta.symbols().clone();
        for row in symbols.iter_mut() {
            row[j] = &row[j] + shift;
        }
        Ok(DorfmanConnection::from_symbols(self.delta.predual().clone(), symbols)?)
    }

    /// `(Δ − Δ')(Γ(U) × Γ(E⊕0)) ⊆ Γ(K)`.
    pub fn check_equivalent(&self, other: &DorfmanConnection, battery: &Battery) -> CheckReport {
        let mut ck = Checker::new("equivalent", "(U,K)-equivalence of Dorfman connections");
        let ring = self.delta.ring();
        for t in battery.tuples(&[self.u.rank(), self.r]) {
            let u = span_section(&self.u, &t[0]);
            let e = t[1].concat(&Section::zero(ring, self.n));
            let diff = &self.delta.apply(&u, &e) - &other.apply(&u, &e);
            let res = self.k.residual(&diff);
            ck.expect_zero("(D - D')(u, (e,0)) in K", res.is_zero(), &[u.to_string(), e.to_string()], &res);
        }
        ck.finish()
    }

    /// `⟦u1,u2⟧_Δ = ⟦u1,u2⟧_{Δ'}` for representatives of the same class.
    pub fn check_bracket_well_defined_on_u(&self, other: &DorfmanConnection, battery: &Battery) -> Result<CheckReport, DiracError> {
        if !self.k.same_as(&self.u_annihilator()) {
            return Err(DiracError::Precondition("K must equal the annihilator of U".into()));
        }
        let mut ck = Checker::new("brackets-on-u", "bracket on U is independent of the representative");
        for t in battery.tuples(&[self.u.rank(), self.u.rank()]) {
            let (u1, u2) = (span_section(&self.u, &t[0]), span_section(&self.u, &t[1]));
            let diff = &self.delta.bracket().bracket(&u1, &u2) - &other.bracket().bracket(&u1, &u2);
            ck.expect_zero("[[u1,u2]]_D = [[u1,u2]]_D'", diff.is_zero(), &[u1.to_string(), u2.to_string()], &diff);
        }
        Ok(ck.finish())
    }

    /// The six conditions on a VB-triple with the verdict labels
    /// `isotropic`, `lagrangian`, `closed` and `dirac`.
    pub fn check_dirac(&self, battery: &Battery) -> CheckReport {
        let ring = self.delta.ring().clone();
        let (ur, kr) = (self.u.rank(), self.k.rank());
        let bracket = self.delta.bracket();

        let mut c1 = Checker::new("dirac-core-closure", "D_u k in Γ(K)");
        for t in battery.tuples(&[ur, kr]) {
            let (u, k) = (span_section(&self.u, &t[0]), span_section(&self.k, &t[1]));
            let res = self.k.residual(&self.delta.apply(&u, &k));
            c1.expect_zero("D_u k in K", res.is_zero(), &[u.to_string(), k.to_string()], &res);
        }

        let mut c2 = Checker::new("dirac-skew", "Skew vanishes on U⊗U");
        for t in battery.tuples(&[ur, ur]) {
            let (u1, u2) = (span_section(&self.u, &t[0]), span_section(&self.u, &t[1]));
            let sk = self.delta.skew(&u1, &u2);
            c2.expect_zero("Skew(u1,u2) = 0", sk.is_zero(), &[u1.to_string(), u2.to_string()], &sk);
        }

        let ann = self.u_annihilator();
        let mut c3 = Checker::new("dirac-isotropic-core", "K contained in the annihilator of U");
        for k in self.k.frame_sections(&ring) {
            let res = ann.residual(&k);
            c3.expect_zero("K in U°", res.is_zero(), &[k.to_string()], &res);
        }
        let isotropic_core = c3.failures() == 0;
        let mut c3b = Checker::new("dirac-lagrangian-core", "K equals the annihilator of U");
        if !(isotropic_core && ann.rank() == kr) {
            c3b.fail("K = U°", &[], format!("rank K = {kr}, rank U° = {}", ann.rank()));
        }

        let mut c4 = Checker::new("dirac-u-closed", "bracket of sections of U stays in U");
        for t in battery.tuples(&[ur, ur]) {
            let (u1, u2) = (span_section(&self.u, &t[0]), span_section(&self.u, &t[1]));
            let res = self.u.residual(&bracket.bracket(&u1, &u2));
            c4.expect_zero("[[u1,u2]] in U", res.is_zero(), &[u1.to_string(), u2.to_string()], &res);
        }

        let mut c5 = Checker::new("dirac-u-jacobi", "restricted bracket on U satisfies Jacobi");
        for t in battery.tuples(&[ur, ur, ur]) {
            let us: Vec<Section> = t.iter().map(|c| span_section(&self.u, c)).collect();
            let j = bracket.jacobiator(&us[0], &us[1], &us[2]);
            c5.expect_zero("Jac(u1,u2,u3) = 0", j.is_zero(), &[us[0].to_string(), us[1].to_string(), us[2].to_string()], &j);
        }

        let mut c6 = Checker::new("dirac-curvature", "R_D(U⊗U⊗(E⊕T*M)) in K");
        let br = self.delta.b_rank();
        for t in battery.tuples(&[ur, ur, br]) {
            let (u1, u2) = (span_section(&self.u, &t[0]), span_section(&self.u, &t[1]));
            let res = self.k.residual(&self.delta.curvature_apply(&u1, &u2, &t[2]));
            c6.expect_zero("R(u1,u2) b in K", res.is_zero(), &[u1.to_string(), u2.to_string(), t[2].to_string()], &res);
        }

        let parts = vec![c1.finish(), c2.finish(), c3.finish(), c3b.finish(), c4.finish(), c5.finish(), c6.finish()];
        let ok = |name: &str| parts.iter().any(|p| p.check == name && p.passed());
        let isotropic = ok("dirac-skew") && ok("dirac-isotropic-core");
        let lagrangian = isotropic && ok("dirac-lagrangian-core");
        let closed = ok("dirac-core-closure") && ok("dirac-u-closed") && ok("dirac-curvature");
        let dirac = lagrangian && closed && ok("dirac-u-jacobi");
        let mut report = CheckReport::combine("dirac", "Dirac triples: isotropy, Lagrangian core and bracket closure", parts);
        for (flag, label) in [(isotropic, "isotropic"), (lagrangian, "lagrangian"), (closed, "closed"), (dirac, "dirac")] {
            if flag {
                report.labels.push(label.to_string());
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::battery::DEFAULT_SEED;
    use crate::dorfman::{standard_dorfman, Christoffel};
    use crate::symkernel::{rat, Ring};

    fn ex_a_triple() -> VBTriple {
        let ring = Ring::numbered("x", 2);
        let delta = standard_dorfman(&Christoffel::parse(&ring, 1, &[&["0"], &["x1"]]).unwrap());
        VBTriple::new(delta, Subspace::whole(3), Subspace::zero(3)).unwrap()
    }

    #[test]
    fn ex_a_full_u_fails_at_jacobi() {
        let t = ex_a_triple();
        let rep = t.check_dirac(&Battery::new(t.delta().ring(), DEFAULT_SEED));
        assert!(!rep.passed());
        assert!(!rep.part("dirac-u-jacobi").unwrap().passed());
        assert!(!rep.part("dirac-curvature").unwrap().passed());
        assert!(rep.part("dirac-skew").unwrap().passed());
        assert_eq!(rep.labels, vec!["isotropic".to_string(), "lagrangian".to_string()]);
    }

    #[test]
    fn foliation_triple_is_dirac() {
        // flat ∇, U = span{∂1} ⊕ E*, K = 0 ⊕ span{dx2}
        let ring = Ring::numbered("x", 2);
        let delta = standard_dorfman(&Christoffel::flat(&ring, 1));
        let u = Subspace::new(3, vec![vec![rat(1), rat(0), rat(0)], vec![rat(0), rat(0), rat(1)]]).unwrap();
        let k = Subspace::new(3, vec![vec![rat(0), rat(0), rat(1)]]).unwrap();
        let t = VBTriple::new(delta, u, k).unwrap();
        assert!(t.k().same_as(&t.u_annihilator()));
        let rep = t.check_dirac(&Battery::new(&ring, DEFAULT_SEED));
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.labels.contains(&"dirac".to_string()));
    }

    #[test]
    fn shifted_representatives() {
        let ring = Ring::numbered("x", 2);
        let delta = standard_dorfman(&Christoffel::flat(&ring, 1));
        let u = Subspace::new(3, vec![vec![rat(1), rat(0), rat(0)], vec![rat(0), rat(0), rat(1)]]).unwrap();
        let k = Subspace::new(3, vec![vec![rat(0), rat(0), rat(1)]]).unwrap();
        let t = VBTriple::new(delta, u, k).unwrap();
        let b = Battery::new(&ring, DEFAULT_SEED);
        let inside = t.shifted_representative(0, &Section::parse(&ring, &["0", "0", "x1"]).unwrap()).unwrap();
        assert!(t.check_equivalent(t.delta(), &b).passed());
        assert!(t.check_equivalent(&inside, &b).passed());
        assert!(t.check_bracket_well_defined_on_u(&inside, &b).unwrap().passed());
        assert!(t.with_delta(inside).unwrap().check_dirac(&b).passed());
        let outside = t.shifted_representative(0, &Section::parse(&ring, &["0", "1", "0"]).unwrap()).unwrap();
        let rep = t.check_equivalent(&outside, &b);
        assert!(!rep.passed());
        assert!(!t.check_bracket_well_defined_on_u(&outside, &b).unwrap().passed());
    }
}
