//! Constructions chained across modules: a triple becomes a Manin pair, the
//! Manin pair's Dirac structure feeds a Bott connection, and so on.

use courant_core::algebroid::AnchoredBracket;
use courant_core::battery::{Battery, DEFAULT_SEED};
use courant_core::bundle::subspace::Subspace;
use courant_core::courant::manin::build_manin_pair;
use courant_core::dirac::VBTriple;
use courant_core::dorfman::bott::BottDorfman;
use courant_core::dorfman::{im_form_dorfman, standard_dorfman, Christoffel, DorfmanConnection, PreDual};
use courant_core::laops::{check_la_dirac, check_ruth_compat, k_algebroid, LieAlgebroidData};
use courant_core::prolong::{check_geometric_dirac, ta_generator_check};
use courant_core::{rat, Mat, Ring, Section, Status};

struct Setup {
    la: LieAlgebroidData,
    triple: VBTriple,
    sigma: Mat,
    battery: Battery,
}

/// `A = TM` over R^2 with a curved connection on `T*M`, the IM 2-form
/// `σ = dx1∧dx2` and `U = K = graph(σ)`.
fn curved_im_form() -> Setup {
    let ring = Ring::numbered("x", 2);
    let battery = Battery::new(&ring, DEFAULT_SEED);
    let la = LieAlgebroidData::new(AnchoredBracket::tangent(&ring), &battery).unwrap();
    let nabla = Christoffel::parse(&ring, 2, &[&["0", "x2", "0", "0"], &["x1", "0", "0", "1"]]).unwrap();
    let sigma = Mat::from_rows(&ring, vec![vec![ring.zero(), ring.int(-1)], vec![ring.int(1), ring.zero()]], 2);
    let frame = vec![vec![rat(1), rat(0), rat(0), rat(1)], vec![rat(0), rat(1), rat(-1), rat(0)]];
    let u = Subspace::new(4, frame.clone()).unwrap();
    let k = Subspace::new(4, frame).unwrap();
    let triple = VBTriple::new(im_form_dorfman(&nabla, &sigma), u, k).unwrap();
    Setup { la, triple, sigma, battery }
}

#[test]
fn manin_pair_dirac_structure_gives_a_bott_connection() {
    let s = curved_im_form();
    assert!(check_la_dirac(&s.la, &s.triple, &s.battery).passed());
    let m = build_manin_pair(&s.la, &s.triple, &s.battery).unwrap();
    let c = m.courant();
    assert!(c.check_axioms(&s.battery).passed());
    let u = m.u_in_c();
    assert!(c.check_dirac(&u, &s.battery).passed());
    let bott = BottDorfman::new(c, &u).unwrap();
    assert_eq!(bott.connection().b_rank(), c.rank() - u.rank());
    for r in [bott.check_definition(&s.battery), bott.check_bott_intertwining(&s.battery), bott.connection().check_axioms(&s.battery)] {
        assert!(r.passed(), "{} failed", r.check);
    }
}

#[test]
fn im_form_manin_pair_is_standard_and_round_trips() {
    let s = curved_im_form();
    let m = build_manin_pair(&s.la, &s.triple, &s.battery).unwrap();
    assert!(m.roundtrip_check(&s.battery).passed());
    assert!(m.check_standard_isomorphism(&s.sigma, &s.battery).passed());
    let recovered = m.recover_triple(&s.battery).unwrap();
    assert!(recovered.u().same_as(s.triple.u()));
    assert!(recovered.k().same_as(s.triple.k()));
}

#[test]
fn core_algebroid_and_ruth_of_an_la_dirac_triple() {
    let s = curved_im_form();
    let (kalg, report) = k_algebroid(&s.la, &s.triple, &s.battery).unwrap();
    assert!(report.passed());
    assert_eq!(kalg.rank(), s.triple.k().rank());
    assert!(kalg.check_lie(&s.battery).passed());
    assert!(check_ruth_compat(&s.la, &s.triple, &s.battery).passed());
    assert!(ta_generator_check(&s.la, s.triple.delta(), &s.battery).passed());
}

#[test]
fn algebraic_and_geometric_dirac_verdicts_agree() {
    let ring = Ring::numbered("x", 2);
    let battery = Battery::new(&ring, DEFAULT_SEED);
    let flat = standard_dorfman(&Christoffel::flat(&ring, 1));
    let curved = standard_dorfman(&Christoffel::parse(&ring, 1, &[&["0"], &["x1"]]).unwrap());
    let foliation = || Subspace::new(3, vec![vec![rat(1), rat(0), rat(0)], vec![rat(0), rat(0), rat(1)]]).unwrap();
    let annihilator = || Subspace::new(3, vec![vec![rat(0), rat(0), rat(1)]]).unwrap();
    // a shift of D_{d1}(e,0) by x1 dx2 stays inside K and keeps the class; x1 dx1 in D_{d1}(0,dx2) leaves K
    let cases = [
        (flat.clone(), foliation(), annihilator(), Status::Pass),
        (curved.clone(), Subspace::whole(3), Subspace::zero(3), Status::Fail),
        (flat.with_symbol(0, 0, Section::parse(&ring, &["0", "0", "x1"]).unwrap()), foliation(), annihilator(), Status::Pass),
        (flat.with_symbol(0, 2, Section::parse(&ring, &["0", "x1", "0"]).unwrap()), foliation(), annihilator(), Status::Fail),
    ];
    for (delta, u, k, expected) in cases {
        let t = VBTriple::new(delta, u, k).unwrap();
        let alg = t.check_dirac(&battery);
        let geo = check_geometric_dirac(&t, &battery);
        assert_eq!((alg.status, geo.status), (expected, expected), "{}", t.delta().symbol(0, 2));
    }
}

#[test]
fn broken_k_bracket_blocks_the_manin_construction() {
    let ring = Ring::numbered("x", 0);
    let battery = Battery::new(&ring, DEFAULT_SEED);
    let z = Section::zero(&ring, 2);
    let e2 = Section::unit(&ring, 2, 1);
    let a = AnchoredBracket::with_zero_anchor(&ring, vec![vec![z.clone(), e2.clone()], vec![-&e2, z]]).unwrap();
    let la = LieAlgebroidData::new(a, &battery).unwrap();
    let delta = DorfmanConnection::from_symbols(PreDual::canonical(&ring, 2), vec![vec![Section::zero(&ring, 2); 2]; 2]).unwrap();
    let u = Subspace::new(2, vec![vec![rat(0), rat(1)]]).unwrap();
    let k = Subspace::new(2, vec![vec![rat(1), rat(0)]]).unwrap();
    let t = VBTriple::new(delta, u, k).unwrap();
    let r = check_la_dirac(&la, &t, &battery);
    assert_eq!(r.status, Status::Fail);
    assert!(!r.all_witnesses().is_empty());
    assert!(build_manin_pair(&la, &t, &battery).is_err());
}
