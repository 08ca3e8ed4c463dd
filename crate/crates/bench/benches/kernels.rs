use std::hint::black_box;

use courant_core::algebroid::AnchoredBracket;
use courant_core::battery::{Battery, DEFAULT_SEED};
use courant_core::bundle::subspace::Subspace;
use courant_core::courant::manin::build_manin_pair;
use courant_core::dirac::VBTriple;
use courant_core::dorfman::{im_form_dorfman, standard_dorfman, Christoffel};
use courant_core::laops::LieAlgebroidData;
use courant_core::prolong::verify_splitting_theorems;
use courant_core::{rat, Mat, Ring, Section};
use criterion::{criterion_group, criterion_main, Criterion};

fn polynomials(c: &mut Criterion) {
    let ring = Ring::numbered("x", 3);
    let p = ring.parse("(x1 + 2*x2 - x3/3 + 1)^4").unwrap();
    let q = ring.parse("(x1*x2 - x3^2 + 5)^3").unwrap();
    c.bench_function("poly/mul", |b| b.iter(|| black_box(&p) * black_box(&q)));
    c.bench_function("poly/parse", |b| b.iter(|| ring.parse(black_box("3*x1^2*x2 - x2*x3/7 + (x1 + x3)^3")).unwrap()));
}

fn dorfman(c: &mut Criterion) {
    let ring = Ring::numbered("x", 2);
    let delta = standard_dorfman(&Christoffel::parse(&ring, 1, &[&["0"], &["x1"]]).unwrap());
    let q = Section::parse(&ring, &["x1*x2", "x2^2 + 1", "x1"]).unwrap();
    let b2 = Section::parse(&ring, &["x2", "x1^2", "3"]).unwrap();
    c.bench_function("dorfman/apply", |b| b.iter(|| delta.apply(black_box(&q), black_box(&b2))));
    c.bench_function("dorfman/curvature", |b| b.iter(|| delta.curvature(black_box(&q), black_box(&b2))));
    let battery = Battery::new(&ring, DEFAULT_SEED);
    c.bench_function("dorfman/check-axioms", |b| b.iter(|| delta.check_axioms(&battery)));
    let mut g = c.benchmark_group("prolong");
    g.sample_size(10);
    g.bench_function("splitting-theorems", |b| b.iter(|| verify_splitting_theorems(&delta, &battery)));
    g.finish();
}

fn manin(c: &mut Criterion) {
    let ring = Ring::numbered("x", 2);
    let battery = Battery::new(&ring, DEFAULT_SEED);
    let la = LieAlgebroidData::new(AnchoredBracket::tangent(&ring), &battery).unwrap();
    let nabla = Christoffel::parse(&ring, 2, &[&["0", "x2", "0", "0"], &["x1", "0", "0", "1"]]).unwrap();
    let sigma = Mat::from_rows(&ring, vec![vec![ring.zero(), ring.int(-1)], vec![ring.int(1), ring.zero()]], 2);
    let frame = vec![vec![rat(1), rat(0), rat(0), rat(1)], vec![rat(0), rat(1), rat(-1), rat(0)]];
    let t =
        VBTriple::new(im_form_dorfman(&nabla, &sigma), Subspace::new(4, frame.clone()).unwrap(), Subspace::new(4, frame).unwrap()).unwrap();
    let mut g = c.benchmark_group("triple");
    g.sample_size(10);
    g.bench_function("check-dirac", |b| b.iter(|| t.check_dirac(&battery)));
    g.bench_function("build-manin-pair", |b| b.iter(|| build_manin_pair(&la, &t, &battery).unwrap()));
    g.finish();
}

criterion_group!(benches, polynomials, dorfman, manin);
criterion_main!(benches);
