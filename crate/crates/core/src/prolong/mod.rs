//! Total-space models of `TE⊕T*E` over `E` and of `TA⊕T*A` over `TM⊕A*`.
//!
//! Functions on the total space of a vector bundle are polynomials in the base
//! coordinates followed by fiber coordinates `y_1..y_r` relative to the frame,
//! so a fiber-linear function `ℓ_ξ` is `Σ ξ_k(x) y_k`. Sections of
//! `TE⊕T*E` are pairs of a vector field and a 1-form in all `n + r`
//! coordinates, and brackets are computed with plain Cartan calculus.
//!
//! The linear lift `ṽ` of `v ∈ Γ(TM⊕E*)` is `(Te·X, dℓ_ξ) − Δ_v(e,0)↑`
//! evaluated on the tautological section `e = Σ y_k ε_k` with the `y_k` held
//! constant. This is legitimate because `Δ_v(c·b) = c·Δ_v b` for constants
//! `c`, so `Δ_v(e,0) = Σ y_k Δ_v(ε_k,0)` and `Te·X = X` in these coordinates.

mod appendix;
mod generators;

pub use appendix::{canonical_form_check, linear_poisson_check};
pub use generators::{ta_generator_check, TaAlgebra};

use std::fmt;

use crate::battery::Battery;
use crate::bundle::cartan::{apply_vf, d, iota_d, lie_derivative_form, vf_bracket};
use crate::bundle::subspace::rank as matrix_rank;
use crate::bundle::Section;
use crate::dirac::VBTriple;
use crate::dorfman::DorfmanConnection;
use crate::report::{CheckReport, Checker};
use crate::symkernel::{Poly, Rational, Ring};

/// The total space of a rank-`r` bundle over a patch.
#[derive(Debug, Clone)]
pub struct TotalPatch {
    base: Ring,
    total: Ring,
    r: usize,
}

impl TotalPatch {
    /// Fiber coordinates get the first prefix among `y, z, p, w` that does
    /// not clash with a base name.
    pub fn new(base: &Ring, r: usize) -> TotalPatch {
        let prefix = ["y", "z", "p", "w", "fib"]
            .into_iter()
            .find(|p| (1..=r).all(|k| base.index_of(&format!("{p}{k}")).is_none()))
            .expect("a free fiber prefix");
        let names: Vec<String> = (1..=r).map(|k| format!("{prefix}{k}")).collect();
        let total = base.extended(&names).expect("fresh fiber names");
        TotalPatch { base: base.clone(), total, r }
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn ring(&self) -> &Ring {
        &self.total
    }

    pub fn base_dim(&self) -> usize {
        self.base.len()
    }

    pub fn fiber_rank(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.total.len()
    }

    pub fn y(&self, k: usize) -> Poly {
        self.total.var(self.base_dim() + k)
    }

    /// `q*φ`.
    pub fn pull(&self, phi: &Poly) -> Poly {
        phi.extend_to(&self.total)
    }

    pub fn pull_section(&self, s: &Section) -> Section {
        s.extend_to(&self.total)
    }

    /// `ℓ_ξ = Σ ξ_k y_k`.
    pub fn ell(&self, xi: &Section) -> Poly {
        let mut acc = self.total.zero();
        for (k, c) in xi.comps().iter().enumerate() {
            if !c.is_zero() {
                acc += &(&self.pull(c) * &self.y(k));
            }
        }
        acc
    }

    /// `Σ y_k s_k` for base sections `s_k`, pulled back.
    pub fn tautological(&self, s: &[Section]) -> Section {
        let len = s.first().map_or(0, Section::len);
        let mut acc = Section::zero(&self.total, len);
        for (k, sk) in s.iter().enumerate() {
            acc = &acc + &self.pull_section(sk).scale(&self.y(k));
        }
        acc
    }

    /// A base vector field or 1-form padded with zero fiber components.
    pub fn horizontal(&self, s: &Section) -> Section {
        self.pull_section(s).concat(&Section::zero(&self.total, self.r))
    }

    /// A fiber vector (or fiber-direction covector) padded with zero base components.
    pub fn vertical(&self, s: &Section) -> Section {
        Section::zero(&self.total, self.base_dim()).concat(&s.extend_to(&self.total))
    }

    /// Splits a total-space polynomial as `c(x) + Σ y_k c_k(x)`; `None` if
    /// some term has fiber degree two or more.
    pub fn split_affine(&self, p: &Poly) -> Option<(Poly, Vec<Poly>)> {
        let n = self.base_dim();
        let mut c0 = self.base.zero();
        let mut lin = vec![self.base.zero(); self.r];
        for (m, c) in p.terms() {
            let e = m.exps();
            let fiber: u32 = e[n..].iter().sum();
            let base = self.base.monomial(c.clone(), &e[..n]);
            match fiber {
                0 => c0 += &base,
                1 => {
                    let k = e[n..].iter().position(|&x| x == 1).expect("fiber degree one");
                    lin[k] += &base;
                }
                _ => return None,
            }
        }
        Some((c0, lin))
    }

    pub fn is_fiber_free(&self, p: &Poly) -> bool {
        let n = self.base_dim();
        p.terms().all(|(m, _)| m.exps()[n..].iter().all(|&e| e == 0))
    }

    /// Restriction of a fiber-free polynomial to the base ring.
    pub fn push(&self, p: &Poly) -> Poly {
        self.split_affine(p).map(|(c, _)| c).expect("fiber-free polynomial")
    }
}

/// A section of `T(total)⊕T*(total)`.
#[derive(Clone, PartialEq)]
pub struct LiftedSection {
    pub vector: Section,
    pub form: Section,
}

impl LiftedSection {
    pub fn zero(ring: &Ring) -> LiftedSection {
        LiftedSection { vector: Section::zero(ring, ring.len()), form: Section::zero(ring, ring.len()) }
    }

    pub fn is_zero(&self) -> bool {
        self.vector.is_zero() && self.form.is_zero()
    }

    pub fn scale(&self, f: &Poly) -> LiftedSection {
        LiftedSection { vector: self.vector.scale(f), form: self.form.scale(f) }
    }

    pub fn add(&self, other: &LiftedSection) -> LiftedSection {
        LiftedSection { vector: &self.vector + &other.vector, form: &self.form + &other.form }
    }

    pub fn sub(&self, other: &LiftedSection) -> LiftedSection {
        LiftedSection { vector: &self.vector - &other.vector, form: &self.form - &other.form }
    }
}

impl fmt::Display for LiftedSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.vector, self.form)
    }
}

impl fmt::Debug for LiftedSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `(f,θ)↑ = (Σ f_k ∂_{y_k}, q*θ)` for `σ = (f,θ)` in the `[E, T*M]` layout.
pub fn lift_core(tp: &TotalPatch, sigma: &Section) -> LiftedSection {
    let r = tp.fiber_rank();
    LiftedSection { vector: tp.vertical(&sigma.slice(0, r)), form: tp.horizontal(&sigma.slice(r, sigma.len())) }
}

/// `φ↑` for `φ ∈ Hom(E, E⊕T*M)` given by its values `φ(ε_k)`.
pub fn lift_hom(tp: &TotalPatch, values: &[Section]) -> LiftedSection {
    let r = tp.fiber_rank();
    let n = tp.base_dim();
    let taut = tp.tautological(values);
    LiftedSection {
        vector: Section::zero(tp.ring(), n).concat(&taut.slice(0, r)),
        form: taut.slice(r, r + n).concat(&Section::zero(tp.ring(), r)),
    }
}

fn e_frame_values(delta: &DorfmanConnection, v: &Section, r: usize) -> Vec<Section> {
    let b = delta.b_rank();
    (0..r).map(|k| delta.apply(v, &Section::unit(delta.ring(), b, k))).collect()
}

/// The linear lift `ṽ` of `v = (X,ξ)`.
pub fn lift_linear(tp: &TotalPatch, delta: &DorfmanConnection, v: &Section) -> LiftedSection {
    let n = tp.base_dim();
    let r = tp.fiber_rank();
    let base = LiftedSection { vector: tp.horizontal(&v.slice(0, n)), form: d(&tp.ell(&v.slice(n, n + r)), tp.dim()) };
    base.sub(&lift_hom(tp, &e_frame_values(delta, v, r)))
}

/// `[(X,α),(Y,β)] = ([X,Y], ℒ_X β − ι_Y dα)` on the total space.
pub fn total_courant(s1: &LiftedSection, s2: &LiftedSection) -> LiftedSection {
    LiftedSection {
        vector: vf_bracket(&s1.vector, &s2.vector),
        form: &lie_derivative_form(&s1.vector, &s2.form) - &iota_d(&s2.vector, &s1.form),
    }
}

/// `⟨(X,α),(Y,β)⟩ = α(Y) + β(X)`.
pub fn total_pairing(s1: &LiftedSection, s2: &LiftedSection) -> Poly {
    &s1.form.dot(&s2.vector) + &s2.form.dot(&s1.vector)
}

fn lift_err(a: &LiftedSection, b: &LiftedSection) -> LiftedSection {
    a.sub(b)
}

/// Splitting theorems: pairings and brackets of linear and core lifts
/// computed on the total space agree with the values predicted by `Δ`.
pub fn verify_splitting_theorems(delta: &DorfmanConnection, battery: &Battery) -> CheckReport {
    let name = "splitting-theorems";
    let anchor = "total-space Courant calculus of linear and core lifts";
    let Some((n, r)) = delta.predual().layout() else {
        return CheckReport::not_applicable(name, anchor, "needs the canonical TM⊕E* layout");
    };
    if r == 0 {
        return CheckReport::not_applicable(name, anchor, "needs a bundle of rank at least one");
    }
    let tp = TotalPatch::new(delta.ring(), r);
    let q = n + r;
    let lin = |v: &Section| lift_linear(&tp, delta, v);
    let core = |s: &Section| lift_core(&tp, s);

    let mut lag = Checker::new("lagrangian", "pairings of linear and core lifts");
    for t in battery.tuples(&[q, q]) {
        let (v1, v2) = (&t[0], &t[1]);
        let diff = &total_pairing(&lin(v1), &lin(v2)) - &tp.ell(&delta.skew(v1, v2));
        lag.expect_zero("<v1~, v2~> = l_Skew(v1,v2)", diff.is_zero(), &[v1.to_string(), v2.to_string()], &diff);
    }
    for t in battery.tuples(&[q, q]) {
        let (v, s) = (&t[0], &t[1]);
        let diff = &total_pairing(&lin(v), &core(s)) - &tp.pull(&delta.predual().pair(v, s));
        lag.expect_zero("<v~, s^> = q*<v,s>", diff.is_zero(), &[v.to_string(), s.to_string()], &diff);
        let cc = total_pairing(&core(v), &core(s));
        lag.expect_zero("<s1^, s2^> = 0", cc.is_zero(), &[v.to_string(), s.to_string()], &cc);
    }

    let mut sup = Checker::new("brackets", "brackets of linear and core lifts");
    for t in battery.tuples(&[q, q]) {
        let (s1, s2) = (&t[0], &t[1]);
        let c = total_courant(&core(s1), &core(s2));
        sup.expect_zero("[s1^, s2^] = 0", c.is_zero(), &[s1.to_string(), s2.to_string()], &c);
        let (v, s) = (s1, s2);
        let diff = lift_err(&total_courant(&lin(v), &core(s)), &core(&delta.apply(v, s)));
        sup.expect_zero("[v~, s^] = (D_v s)^", diff.is_zero(), &[v.to_string(), s.to_string()], &diff);
    }
    for t in battery.tuples(&[q, q]) {
        let (v1, v2) = (&t[0], &t[1]);
        let curv: Vec<Section> = (0..r).map(|k| delta.curvature_apply(v1, v2, &Section::unit(delta.ring(), q, k))).collect();
        let rhs = lin(&delta.bracket().bracket(v1, v2)).sub(&lift_hom(&tp, &curv));
        let diff = lift_err(&total_courant(&lin(v1), &lin(v2)), &rhs);
        sup.expect_zero("[v1~, v2~] = [[v1,v2]]~ - R(v1,v2)(.,0)^", diff.is_zero(), &[v1.to_string(), v2.to_string()], &diff);
    }

    let mut tech = Checker::new("linear-functions", "X~(l_eta) = l_psi");
    for t in battery.tuples(&[q, r]) {
        let (v, eta) = (&t[0], &t[1]);
        let x = v.slice(0, n);
        let psi = Section::new(
            delta.ring(),
            e_frame_values(delta, v, r).iter().enumerate().map(|(k, dv)| &apply_vf(&x, eta.get(k)) - &eta.dot(&dv.slice(0, r))).collect(),
        );
        let diff = &apply_vf(&lin(v).vector, &tp.ell(eta)) - &tp.ell(&psi);
        tech.expect_zero("X~(l_eta) = l_psi", diff.is_zero(), &[v.to_string(), eta.to_string()], &diff);
    }
    CheckReport::combine(name, anchor, vec![lag.finish(), sup.finish(), tech.finish()])
}

/// Decomposition of a section into `ũ + σ↑ + Φ↑`, with `Φ(ε_k)` listed.
#[derive(Debug, Clone)]
pub struct Structured {
    pub linear: Section,
    pub core: Section,
    pub hom: Vec<Section>,
}

/// Reads a linear-plus-core section of `TE⊕T*E` back into its parts.
pub fn decompose(tp: &TotalPatch, delta: &DorfmanConnection, s: &LiftedSection) -> Option<Structured> {
    let (n, r) = (tp.base_dim(), tp.fiber_rank());
    let base = tp.base();
    let mut lin = Vec::with_capacity(n + r);
    for i in 0..n {
        let c = s.vector.get(i);
        if !tp.is_fiber_free(c) {
            return None;
        }
        lin.push(tp.push(c));
    }
    for k in 0..r {
        let c = s.form.get(n + k);
        if !tp.is_fiber_free(c) {
            return None;
        }
        lin.push(tp.push(c));
    }
    let linear = Section::new(base, lin);
    let rest = s.sub(&lift_linear(tp, delta, &linear));
    let mut core = vec![base.zero(); r + n];
    let mut hom = vec![vec![base.zero(); r + n]; r];
    let mut take = |p: &Poly, slot: usize| -> Option<()> {
        let (c0, c1) = tp.split_affine(p)?;
        core[slot] = c0;
        for (k, c) in c1.into_iter().enumerate() {
            hom[k][slot] = c;
        }
        Some(())
    };
    if (0..n).any(|i| !rest.vector.get(i).is_zero()) {
        return None;
    }
    for k in 0..r {
        if !rest.form.get(n + k).is_zero() {
            return None;
        }
        take(rest.vector.get(n + k), k)?;
    }
    for i in 0..n {
        take(rest.form.get(i), r + i)?;
    }
    Some(Structured { linear, core: Section::new(base, core), hom: hom.into_iter().map(|h| Section::new(base, h)).collect() })
}

fn sample_points(dim: usize) -> Vec<Vec<Rational>> {
    let mut pts = vec![vec![Rational::from_integer(0.into()); dim]];
    pts.push((0..dim).map(|i| Rational::from_integer(((i as i64) + 1).into())).collect());
    pts.push((0..dim).map(|i| Rational::new(((2 * i as i64) - 3).into(), 2.into())).collect());
    pts
}

/// Builds the subbundle `D ⊆ TE⊕T*E` spanned by the linear lifts of a
/// `U`-frame and the core lifts of a `K`-frame and tests it directly:
/// isotropy, rank `dim E`, and closure of the Courant-Dorfman bracket.
pub fn check_geometric_dirac(t: &VBTriple, battery: &Battery) -> CheckReport {
    let name = "geometric-dirac";
    let anchor = "the double vector subbundle of TE+T*E defined by (U,K,D)";
    let (n, r) = (t.base_dim(), t.fiber_rank());
    let delta = t.delta();
    let ring = delta.ring();
    let tp = TotalPatch::new(ring, r);
    let u_frame = t.u().frame_sections(ring);
    let k_frame = t.k().frame_sections(ring);
    let mut span: Vec<(String, LiftedSection)> = Vec::new();
    for u in &u_frame {
        span.push((format!("lin{u}"), lift_linear(&tp, delta, u)));
    }
    for k in &k_frame {
        span.push((format!("core{k}"), lift_core(&tp, k)));
    }
    let mut ck = Checker::new(name, anchor);
    for (i, (ni, si)) in span.iter().enumerate() {
        for (nj, sj) in span.iter().skip(i) {
            let p = total_pairing(si, sj);
            ck.expect_zero("isotropic", p.is_zero(), &[ni.clone(), nj.clone()], &p);
        }
    }
    let dim = tp.dim();
    for pt in sample_points(dim) {
        let rows: Vec<Vec<Rational>> =
            span.iter().map(|(_, s)| s.vector.comps().iter().chain(s.form.comps()).map(|c| c.eval(&pt)).collect()).collect();
        let rk = matrix_rank(&rows, 2 * dim);
        if rk != n + r {
            ck.fail("rank equals dim E", &[format!("{pt:?}")], format!("rank {rk}, expected {}", n + r));
        }
    }
    for (ni, si) in &span {
        for (nj, sj) in &span {
            let inputs = [ni.clone(), nj.clone()];
            let br = total_courant(si, sj);
            match decompose(&tp, delta, &br) {
                None => ck.fail("bracket is linear plus core", &inputs, br.to_string()),
                Some(st) => {
                    let mut bad = t.u().residual(&st.linear);
                    bad = bad.concat(&t.k().residual(&st.core));
                    for h in &st.hom {
                        bad = bad.concat(&t.k().residual(h));
                    }
                    ck.expect_zero("bracket stays in D", bad.is_zero(), &inputs, &br);
                }
            }
        }
    }
    let geometric = ck.failures() == 0;
    let algebraic = t.check_dirac(battery).passed();
    ck.note(format!(
        "algebraic verdict {}, geometric verdict {}",
        if algebraic { "pass" } else { "fail" },
        if geometric { "pass" } else { "fail" }
    ));
    if geometric != algebraic {
        ck.fail("agrees with the algebraic Dirac check", &[], "verdicts differ".into());
    }
    ck.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::battery::DEFAULT_SEED;
    use crate::bundle::subspace::Subspace;
    use crate::dorfman::{standard_dorfman, Christoffel};
    use crate::symkernel::rat;

    fn ex_a() -> (Ring, DorfmanConnection) {
        let ring = Ring::numbered("x", 2);
        let nabla = Christoffel::parse(&ring, 1, &[&["0"], &["x1"]]).unwrap();
        (ring.clone(), standard_dorfman(&nabla))
    }

    #[test]
    fn ex_a_lifts() {
        let (ring, delta) = ex_a();
        let tp = TotalPatch::new(&ring, 1);
        let t = tp.ring();
        let v1 = Section::parse(&ring, &["1", "0", "0"]).unwrap();
        let v2 = Section::parse(&ring, &["0", "1", "0"]).unwrap();
        let l1 = lift_linear(&tp, &delta, &v1);
        assert_eq!(l1.vector, Section::parse(t, &["1", "0", "0"]).unwrap());
        assert!(l1.form.is_zero());
        let l2 = lift_linear(&tp, &delta, &v2);
        assert_eq!(l2.vector, Section::parse(t, &["0", "1", "-1*x1*y1"]).unwrap());
        let eps = Section::parse(&ring, &["1", "0", "0"]).unwrap();
        let c = lift_core(&tp, &eps);
        assert_eq!(c.vector, Section::parse(t, &["0", "0", "1"]).unwrap());
        assert!(c.form.is_zero());
        let br = total_courant(&l1, &l2);
        assert_eq!(br.vector, Section::parse(t, &["0", "0", "-1*y1"]).unwrap());
        assert!(br.form.is_zero());
        let vc = total_courant(&l2, &c);
        assert_eq!(vc.vector, Section::parse(t, &["0", "0", "x1"]).unwrap());
    }

    #[test]
    fn splitting_theorems_on_ex_a() {
        let (ring, delta) = ex_a();
        let b = Battery::new(&ring, DEFAULT_SEED);
        let r = verify_splitting_theorems(&delta, &b);
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn splitting_theorems_with_skew() {
        let ring = Ring::numbered("x", 2);
        let nabla = Christoffel::parse(&ring, 2, &[&["0", "x2", "0", "0"], &["x1", "0", "0", "1"]]).unwrap();
        let base = standard_dorfman(&nabla);
        let mut symbols = base.symbols().clone();
        symbols[2][0] = Section::parse(&ring, &["x1", "0", "1", "x2"]).unwrap();
        let delta = DorfmanConnection::from_symbols(base.predual().clone(), symbols).unwrap();
        assert!(!delta.skew_vanishes());
        let b = Battery::new(&ring, DEFAULT_SEED);
        let r = verify_splitting_theorems(&delta, &b);
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn geometric_dirac_for_ex_a_full_u_fails() {
        let (ring, delta) = ex_a();
        let t = VBTriple::new(delta, Subspace::whole(3), Subspace::zero(3)).unwrap();
        let b = Battery::new(&ring, DEFAULT_SEED);
        let r = check_geometric_dirac(&t, &b);
        assert!(!r.passed());
        assert!(r.witnesses.iter().all(|w| w.label != "agrees with the algebraic Dirac check"));
    }

    #[test]
    fn geometric_dirac_for_flat_graph() {
        let ring = Ring::numbered("x", 2);
        let delta = standard_dorfman(&Christoffel::flat(&ring, 2));
        let u = Subspace::new(4, vec![vec![rat(1), rat(0), rat(0), rat(0)], vec![rat(0), rat(1), rat(0), rat(0)]]).unwrap();
        let k = Subspace::new(4, vec![vec![rat(1), rat(0), rat(0), rat(0)], vec![rat(0), rat(1), rat(0), rat(0)]]).unwrap();
        let t = VBTriple::new(delta, u, k).unwrap();
        let b = Battery::new(&ring, DEFAULT_SEED);
        let r = check_geometric_dirac(&t, &b);
        assert!(r.passed(), "{r:#?}");
    }
}
