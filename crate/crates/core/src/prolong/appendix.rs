//! The linear Poisson structure on `A*` and the pulled-back canonical form.

use super::{lift_core, lift_linear, TotalPatch};
use crate::battery::Battery;
use crate::bundle::cartan::{d, d_form, vf_bracket};
use crate::bundle::{Mat, Section};
use crate::dorfman::{standard_dorfman, Christoffel};
use crate::laops::LieAlgebroidData;
use crate::report::{CheckReport, Checker};
use crate::symkernel::Poly;

/// `π^{ab} = {z_a, z_b}` on the total space of `A*` with fiber coordinates
/// `p_k = ℓ_{e_k}`.
fn poisson_matrix(la: &LieAlgebroidData, tp: &TotalPatch) -> Mat {
    let (n, r) = (la.base_dim(), la.rank());
    let ring = tp.ring();
    let alg = la.algebroid();
    let mut m = Mat::zero(ring, n + r, n + r);
    for k in 0..r {
        let rho_k = tp.pull_section(&alg.anchor().column(k));
        for i in 0..n {
            m.entries[n + k][i] = rho_k.get(i).clone();
            m.entries[i][n + k] = -rho_k.get(i);
        }
        for l in 0..r {
            m.entries[n + k][n + l] = tp.ell(alg.structure(k, l));
        }
    }
    m
}

fn sharp(pi: &Mat, alpha: &Section) -> Section {
    pi.transpose().apply(alpha)
}

fn poisson(pi: &Mat, f: &Poly, g: &Poly) -> Poly {
    let dim = pi.rows;
    d(f, dim).dot(&pi.apply(&d(g, dim)))
}

/// Builds the linear Poisson bivector of `A*` from `{ℓ_a,ℓ_b} = ℓ_{[a,b]}`,
/// `{ℓ_a, q*φ} = q*(ρ(a)φ)` and checks `π♯(q*θ) = −(ρ*θ)↑` and
/// `π♯(dℓ_a) = ρ(a)~`, the latter built as `Tξ·ρ(a) − (ℒ_a ξ)↑` on the
/// tautological `ξ`.
pub fn linear_poisson_check(la: &LieAlgebroidData, battery: &Battery) -> CheckReport {
    let (n, r) = (la.base_dim(), la.rank());
    let tp = TotalPatch::new(la.ring(), r);
    let ring = tp.ring();
    let pi = poisson_matrix(la, &tp);
    let mut ck = Checker::new("linear-poisson", "the linear Poisson structure on the dual of a Lie algebroid");
    let coords: Vec<Poly> = (0..n + r).map(|a| ring.var(a)).collect();
    for a in 0..n + r {
        for b in a..n + r {
            for c in b..n + r {
                let (x, y, z) = (&coords[a], &coords[b], &coords[c]);
                let jac = &(&poisson(&pi, x, &poisson(&pi, y, z)) + &poisson(&pi, y, &poisson(&pi, z, x)))
                    + &poisson(&pi, z, &poisson(&pi, x, y));
                ck.expect_zero("Jacobi identity of the bracket", jac.is_zero(), &[x.to_string(), y.to_string(), z.to_string()], &jac);
            }
        }
    }
    for theta in battery.sections(n) {
        let lhs = sharp(&pi, &tp.horizontal(&theta));
        let rhs = -&tp.vertical(&la.rho_star(&theta));
        let diff = &lhs - &rhs;
        ck.expect_zero("pi#(q*theta) = -(rho* theta)^", diff.is_zero(), &[theta.to_string()], &diff);
    }
    for a in battery.sections(r) {
        let lhs = sharp(&pi, &d(&tp.ell(&a), n + r));
        let correction: Vec<Poly> = (0..r).map(|l| tp.ell(&la.algebroid().bracket(&a, &Section::unit(la.ring(), r, l)))).collect();
        let rhs = tp.horizontal(&la.rho(&a)).slice(0, n).concat(&Section::new(ring, correction));
        let diff = &lhs - &rhs;
        ck.expect_zero("pi#(d l_a) = rho(a)~", diff.is_zero(), &[a.to_string()], &diff);
    }
    ck.finish()
}

/// `σ*θ_can` on the total space of `E`, for `σ: E → T*M` given by the
/// `n × r` matrix `σ(ε_k) = Σ_m σ[m][k] dx_m`.
fn pulled_liouville(tp: &TotalPatch, sigma: &Mat) -> Section {
    let cols: Vec<Section> = (0..sigma.cols).map(|k| sigma.column(k)).collect();
    tp.tautological(&cols).concat(&Section::zero(tp.ring(), tp.fiber_rank()))
}

/// Pulls back the canonical symplectic form of `T*M` along `σ` and compares
/// it with its expressions on linear and vertical vector fields.
///
/// The value `σ*ω_can = d(σ*θ_can)` is the one whose expansion produces the
/// displayed formulas; `−d(σ*θ_can)` gives the opposite sign everywhere and
/// the report says which of the two conventions the data supports.
pub fn canonical_form_check(sigma: &Mat, nabla: &Christoffel, battery: &Battery) -> CheckReport {
    let n = sigma.rows;
    let r = sigma.cols;
    let ring = nabla.ring();
    let name = "canonical-form";
    let anchor = "pullback of the canonical symplectic form along sigma";
    if nabla.rank() != r || ring.len() != n {
        return CheckReport::error(name, anchor, "sigma, connection and patch dimensions disagree");
    }
    let tp = TotalPatch::new(ring, r);
    let delta = standard_dorfman(nabla);
    let omega = d_form(&pulled_liouville(&tp, sigma));
    let apply = |v: &Section, w: &Section| v.dot(&omega.apply(w));
    let flat = |v: &Section| omega.transpose().apply(v);
    let sigma_star = |x: &Section| sigma.transpose().apply(x);
    let sigma_of = |e: &Section| sigma.apply(e);
    let lift_x = |x: &Section| lift_linear(&tp, &delta, &x.concat(&Section::zero(ring, r))).vector;
    let lift_e = |e: &Section| lift_core(&tp, &e.concat(&Section::zero(ring, n))).vector;
    let mut ck = Checker::new(name, anchor);
    let mut opposite_ok = true;
    for t in battery.tuples(&[n, n]) {
        let (x, y) = (&t[0], &t[1]);
        let expected =
            &(&nabla.dual_covariant(x, &sigma_star(y)) - &nabla.dual_covariant(y, &sigma_star(x))) - &sigma_star(&vf_bracket(x, y));
        let value = apply(&lift_x(x), &lift_x(y));
        let diff = &value - &tp.ell(&expected);
        opposite_ok &= (&value + &tp.ell(&expected)).is_zero();
        ck.expect_zero("omega(X~, Y~) = l_(D*_X s*Y - D*_Y s*X - s*[X,Y])", diff.is_zero(), &[x.to_string(), y.to_string()], &diff);
    }
    for t in battery.tuples(&[n, r]) {
        let (x, e) = (&t[0], &t[1]);
        let expected = -&tp.pull(&sigma_of(e).dot(x));
        let value = apply(&lift_x(x), &lift_e(e));
        opposite_ok &= (&value + &expected).is_zero();
        let diff = &value - &expected;
        ck.expect_zero("omega(X~, e^) = -q*<sigma e, X>", diff.is_zero(), &[x.to_string(), e.to_string()], &diff);

        // (ℒ_X(σ(·)) − σ(∇_X ·))↑ as a horizontal form; this is the sign forced
        // by the three values above and by the T*M case ⟨·, Tor(X,·) + ∇_·X⟩
        let hom: Vec<Section> = (0..r)
            .map(|k| {
                let ek = Section::unit(ring, r, k);
                &crate::bundle::cartan::lie_derivative_form(x, &sigma_of(&ek)) - &sigma_of(&nabla.covariant(x, &ek))
            })
            .collect();
        let expected = &d(&tp.ell(&-&sigma_star(x)), n + r) + &tp.tautological(&hom).concat(&Section::zero(tp.ring(), r));
        let diff = &flat(&lift_x(x)) - &expected;
        ck.expect_zero("omega-flat(X~) = d l_(-s*X) + (L_X s(.) - s(D_X .))^", diff.is_zero(), &[x.to_string()], &diff);
        let diff = &flat(&lift_e(e)) - &tp.horizontal(&sigma_of(e));
        ck.expect_zero("omega-flat(e^) = q*(sigma e)", diff.is_zero(), &[e.to_string()], &diff);
    }
    for t in battery.tuples(&[r, r]) {
        let v = apply(&lift_e(&t[0]), &lift_e(&t[1]));
        ck.expect_zero("omega(e^, f^) = 0", v.is_zero(), &[t[0].to_string(), t[1].to_string()], &v);
    }
    if ck.failures() == 0 && !sigma.is_zero() {
        ck.note("the formulas hold for sigma*omega_can = d(sigma*theta_can); the convention omega_can = -d theta_can reverses every sign");
    } else if ck.failures() > 0 && opposite_ok {
        ck.note("the formulas hold with the opposite sign, i.e. for sigma*omega_can = -d(sigma*theta_can)");
    }
    ck.finish()
}
