//! Algebraic invariants on randomly generated data. Pairings, anchors and
//! differentials are recomputed here from coordinates rather than taken
//! from the library.

use courant_core::battery::{Battery, DEFAULT_SEED};
use courant_core::bundle::cartan::vf_bracket;
use courant_core::bundle::subspace::Subspace;
use courant_core::courant::CourantData;
use courant_core::dirac::VBTriple;
use courant_core::dorfman::{standard_dorfman, Christoffel};
use courant_core::{rat, ratio, Poly, Ring, Section};
use proptest::prelude::*;

fn r2() -> Ring {
    Ring::numbered("x", 2)
}

/// Polynomials of degree at most `deg` in two variables with small coefficients.
fn poly(deg: u32) -> impl Strategy<Value = Poly> {
    let ring = r2();
    prop::collection::vec((-3i64..=3, 1i64..=2, 0..=deg, 0..=deg), 0..4).prop_map(move |terms| {
        terms.into_iter().filter(|t| t.2 + t.3 <= deg).fold(ring.zero(), |mut p, (c, d, a, b)| {
            p += &ring.monomial(ratio(c, d), &[a, b]);
            p
        })
    })
}

fn section(len: usize, deg: u32) -> impl Strategy<Value = Section> {
    prop::collection::vec(poly(deg), len).prop_map(|comps| Section::new(&r2(), comps))
}

/// Connection symbols on a rank-1 bundle over R^2, affine in the coordinates.
fn christoffel() -> impl Strategy<Value = Christoffel> {
    prop::collection::vec(poly(1), 2)
        .prop_map(|g| Christoffel::new(&r2(), 1, g.into_iter().map(|p| vec![Section::new(&r2(), vec![p])]).collect()))
}

fn vf_apply(x: &Section, f: &Poly) -> Poly {
    (0..x.len()).fold(f.ring().zero(), |acc, i| &acc + &(x.get(i) * &f.partial(i)))
}

/// `⟨(X,ξ),(e,θ)⟩ = ξ(e) + θ(X)` for `Q = TM⊕E*`, `B = E⊕T*M`, rank E = 1.
fn pair(q: &Section, b: &Section) -> Poly {
    &(q.get(2) * b.get(0)) + &(&(q.get(0) * b.get(1)) + &(q.get(1) * b.get(2)))
}

fn d_b(f: &Poly) -> Section {
    Section::new(f.ring(), vec![f.ring().zero(), f.partial(0), f.partial(1)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn vector_field_bracket_is_a_lie_bracket(x in section(2, 2), y in section(2, 2), z in section(2, 1)) {
        prop_assert_eq!(vf_bracket(&x, &y), -&vf_bracket(&y, &x));
        let jac = &(&vf_bracket(&x, &vf_bracket(&y, &z)) + &vf_bracket(&y, &vf_bracket(&z, &x))) + &vf_bracket(&z, &vf_bracket(&x, &y));
        prop_assert!(jac.is_zero());
    }

    #[test]
    fn standard_dorfman_satisfies_the_axioms(nabla in christoffel(), q in section(3, 1), qp in section(3, 1), b in section(3, 1), f in poly(2)) {
        let delta = standard_dorfman(&nabla);
        let x = q.slice(0, 2);
        let base = delta.apply(&q, &b);
        prop_assert_eq!(delta.apply(&q.scale(&f), &b), &base.scale(&f) + &d_b(&f).scale(&pair(&q, &b)));
        prop_assert_eq!(delta.apply(&q, &b.scale(&f)), &base.scale(&f) + &b.scale(&vf_apply(&x, &f)));
        let lhs = vf_apply(&x, &pair(&qp, &b));
        let rhs = &pair(&delta.bracket().bracket(&q, &qp), &b) + &pair(&qp, &base);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn standard_dorfman_is_lagrangian(nabla in christoffel(), q1 in section(3, 1), q2 in section(3, 1)) {
        prop_assert!(standard_dorfman(&nabla).skew(&q1, &q2).is_zero());
    }

    #[test]
    fn curvature_is_tensorial(nabla in christoffel(), q1 in section(3, 1), q2 in section(3, 1), b in section(3, 1), f in poly(1)) {
        let delta = standard_dorfman(&nabla);
        let base = delta.curvature_apply(&q1, &q2, &b).scale(&f);
        prop_assert_eq!(delta.curvature_apply(&q1.scale(&f), &q2, &b), base.clone());
        prop_assert_eq!(delta.curvature_apply(&q1, &q2.scale(&f), &b), base.clone());
        prop_assert_eq!(delta.curvature_apply(&q1, &q2, &b.scale(&f)), base);
    }

    #[test]
    fn standard_courant_symmetry_and_invariance(e1 in section(4, 2), e2 in section(4, 2), e3 in section(4, 1)) {
        let c = CourantData::standard(&r2());
        let p = |a: &Section, b: &Section| &(&(a.get(0) * b.get(2)) + &(a.get(1) * b.get(3))) + &(&(a.get(2) * b.get(0)) + &(a.get(3) * b.get(1)));
        let g = p(&e1, &e2);
        let dg = Section::new(&r2(), vec![r2().zero(), r2().zero(), g.partial(0), g.partial(1)]);
        prop_assert_eq!(&c.bracket(&e1, &e2) + &c.bracket(&e2, &e1), dg);
        let lhs = vf_apply(&e1.slice(0, 2), &p(&e2, &e3));
        prop_assert_eq!(lhs, &p(&c.bracket(&e1, &e2), &e3) + &p(&e2, &c.bracket(&e1, &e3)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// The Dirac verdict depends only on the class of the Dorfman connection
    /// modulo shifts by sections of K.
    #[test]
    fn dirac_verdict_is_class_invariant(f in poly(1), curved in any::<bool>()) {
        let ring = r2();
        let nabla = if curved {
            Christoffel::parse(&ring, 1, &[&["0"], &["x1"]]).unwrap()
        } else {
            Christoffel::flat(&ring, 1)
        };
        let u = Subspace::new(3, vec![vec![rat(1), rat(0), rat(0)], vec![rat(0), rat(0), rat(1)]]).unwrap();
        let k = Subspace::new(3, vec![vec![rat(0), rat(0), rat(1)]]).unwrap();
        let t = VBTriple::new(standard_dorfman(&nabla), u, k).unwrap();
        let shift = Section::new(&ring, vec![ring.zero(), ring.zero(), f]);
        let moved = t.with_delta(t.shifted_representative(0, &shift).unwrap()).unwrap();
        let battery = Battery::new(&ring, DEFAULT_SEED);
        prop_assert!(t.check_equivalent(moved.delta(), &battery).passed());
        prop_assert_eq!(t.check_dirac(&battery).status, moved.check_dirac(&battery).status);
    }
}
