//! Named example structures, each emitted as a [`StructureSpec`].

use courant_core::battery::{Battery, DEFAULT_SEED};
use courant_core::courant::manin::build_manin_pair;
use courant_core::courant::CourantData;
use courant_core::laops::LieAlgebroidData;

use crate::model::Model;
use crate::spec::{
    AnchorSpec, BracketKind, BracketSpec, BundleSpec, ChecksSpec, DorfmanKind, DorfmanSpec, Entry, Expect, PatchSpec, StructureSpec,
    SubbundleSpec,
};

/// Catalog entry names with one-line descriptions, in the order used by
/// `verify-all`.
pub const ENTRIES: &[(&str, &str)] = &[
    ("ex-a", "rank-1 bundle over R^2 with a curved connection and its standard Dorfman connection"),
    ("ex-a-full-u", "ex-a with U = TM+E*, K = 0: not Dirac, the curvature obstructs Jacobi"),
    ("trivial", "zero pairing: any TM-connection on a line bundle is a Dorfman connection"),
    ("bott-foliation", "Bott-Dorfman connection of the foliation by x1-lines inside TM+T*M"),
    ("standard-courant", "the standard Courant algebroid TM+T*M over R^2 with the Dirac structure TM"),
    ("foliation", "flat connection, U = F+E*, K = 0+F annihilator for F spanned by d/dx1"),
    ("im2form", "E = T*M with sigma = id: U and K the graphs of -sigma* and sigma"),
    ("nonholonomic", "E = T*M, sigma = id, curved connection, constraint distribution spanned by d/dx1"),
    ("linear-poisson", "A = TM over R^1 and the linear Poisson structure on A*"),
    ("point-bialgebroid", "aff(1) over a point with zero Dorfman connection, U = A*, K = 0"),
    ("lie-dual-point", "aff(1) over a point with the coboundary dual bracket [e1*, e2*] = e1*"),
    ("tangent-r2", "A = TM over R^2, flat connection, sigma = 0, U = TM+0, K = A+0"),
    ("im2form-la", "A = TM over R^2, curved connection, sigma = dx1^dx2, U and K its graphs"),
    ("neg-axiom-c", "tangent-r2 with one symbol perturbed so that axiom (c) breaks"),
    ("neg-nonisotropic", "foliation with K spanned by dx1, which pairs with U"),
    ("neg-la-dirac", "point-bialgebroid with K = span e1, U = span e2*: condition (4) fails"),
    ("neg-manin", "the Courant algebroid of point-bialgebroid with one condition-(c) bracket removed"),
    ("neg-courant", "standard-courant with a broken structure function"),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|(n, _)| *n)
}

pub fn catalog(name: &str) -> Option<StructureSpec> {
    let mut spec = match name {
        "ex-a" => ex_a(),
        "ex-a-full-u" => ex_a_full_u(),
        "trivial" => trivial(),
        "bott-foliation" => bott_foliation(),
        "standard-courant" => standard_courant(),
        "foliation" => foliation(false),
        "im2form" => im2form(),
        "nonholonomic" => nonholonomic(),
        "linear-poisson" => linear_poisson(),
        "point-bialgebroid" => point_bialgebroid(),
        "lie-dual-point" => lie_dual_point(),
        "tangent-r2" => tangent_r2(),
        "im2form-la" => im2form_la(),
        "neg-axiom-c" => neg_axiom_c(),
        "neg-nonisotropic" => foliation(true),
        "neg-la-dirac" => neg_la_dirac(),
        "neg-manin" => neg_manin(),
        "neg-courant" => neg_courant(),
        _ => return None,
    };
    spec.name = name.to_string();
    spec.description = ENTRIES.iter().find(|(n, _)| *n == name).map(|(_, d)| d.to_string()).unwrap_or_default();
    Some(spec)
}

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn rows(v: &[&[&str]]) -> Vec<Vec<String>> {
    v.iter().map(|r| strs(r)).collect()
}

fn identity(n: usize) -> Vec<Vec<String>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { "1" } else { "0" }.to_string()).collect()).collect()
}

fn base(coords: &[&str]) -> StructureSpec {
    StructureSpec { patch: PatchSpec { coords: strs(coords) }, ..Default::default() }
}

fn bundle(spec: &mut StructureSpec, name: &str, frame: &[&str]) {
    spec.bundle.insert(name.into(), BundleSpec { frame: strs(frame) });
}

fn subbundle(spec: &mut StructureSpec, name: &str, dim: usize, frame: Vec<Vec<String>>) {
    spec.subbundle.insert(name.into(), SubbundleSpec { dim, frame });
}

fn checks(spec: &mut StructureSpec, run: &[&str], expect: Expect) {
    spec.checks = ChecksSpec { run: strs(run), expect };
}

fn dorfman(bundle: &str, kind: DorfmanKind) -> DorfmanSpec {
    DorfmanSpec { bundle: bundle.into(), kind, ..Default::default() }
}

/// `A = TM` over the patch, with the identity anchor and coordinate frame.
fn tangent_algebroid(spec: &mut StructureSpec, n: usize) {
    let frame: Vec<String> = (1..=n).map(|i| format!("d{i}")).collect();
    let frame: Vec<&str> = frame.iter().map(String::as_str).collect();
    bundle(spec, "T", &frame);
    spec.anchor.insert("A".into(), AnchorSpec { bundle: "T".into(), matrix: identity(n) });
}

fn ex_a() -> StructureSpec {
    let mut s = base(&["x1", "x2"]);
    bundle(&mut s, "E", &["e"]);
    s.dorfman.insert("D".into(), DorfmanSpec { christoffel: rows(&[&["0"], &["x1"]]), ..dorfman("E", DorfmanKind::Standard) });
    checks(
        &mut s,
        &["predual", "dorfman-axioms", "curvature-tensorial", "curvature-jacobiator", "skew", "splitting-theorems", "canonical-form"],
        Expect::Pass,
    );
    s
}

fn ex_a_full_u() -> StructureSpec {
    let mut s = ex_a();
    subbundle(&mut s, "U", 3, identity(3));
    subbundle(&mut s, "K", 3, vec![]);
    let d = s.dorfman.get_mut("D").expect("ex-a declares D");
    d.u = Some("U".into());
    d.k = Some("K".into());
    checks(&mut s, &["dirac", "geometric-dirac"], Expect::Fail);
    s
}

fn trivial() -> StructureSpec {
    let mut s = base(&["x1", "x2"]);
    tangent_algebroid(&mut s, 2);
    bundle(&mut s, "L", &["b"]);
    s.dorfman.insert(
        "D".into(),
        DorfmanSpec { q: Some("A".into()), symbols: vec![Entry::new(2, 1, &["x1"])], ..dorfman("L", DorfmanKind::Trivial) },
    );
    checks(&mut s, &["lie", "dorfman-axioms", "curvature-tensorial", "curvature-jacobiator"], Expect::Pass);
    s
}

fn standard_courant_into(s: &mut StructureSpec) {
    bundle(s, "TT", &["d1", "d2", "dx1", "dx2"]);
    s.anchor.insert("C".into(), AnchorSpec { bundle: "TT".into(), matrix: rows(&[&["1", "0", "0", "0"], &["0", "1", "0", "0"]]) });
    s.bracket.insert(
        "C".into(),
        BracketSpec {
            bundle: "TT".into(),
            kind: BracketKind::Courant,
            pairing: rows(&[&["0", "0", "1", "0"], &["0", "0", "0", "1"], &["1", "0", "0", "0"], &["0", "1", "0", "0"]]),
            ..Default::default()
        },
    );
}

fn standard_courant() -> StructureSpec {
    let mut s = base(&["x1", "x2"]);
    standard_courant_into(&mut s);
    subbundle(&mut s, "L", 4, rows(&[&["1", "0", "0", "0"], &["0", "1", "0", "0"]]));
    s.bracket.get_mut("C").expect("declared above").dirac = Some("L".into());
    checks(&mut s, &["courant-axioms", "dirac-in-courant"], Expect::Pass);
    s
}

fn neg_courant() -> StructureSpec {
    let mut s = standard_courant();
    s.bracket.get_mut("C").expect("declared above").entries = vec![Entry::new(1, 2, &["0", "0", "x1", "0"])];
    checks(&mut s, &["courant-axioms"], Expect::Fail);
    s
}

fn bott_foliation() -> StructureSpec {
    let mut s = base(&["x1", "x2"]);
    standard_courant_into(&mut s);
    bundle(&mut s, "CK", &["w1", "w2", "w3"]);
    subbundle(&mut s, "F", 4, rows(&[&["1", "0", "0", "0"]]));
    s.dorfman
        .insert("D".into(), DorfmanSpec { courant: Some("C".into()), isotropic: Some("F".into()), ..dorfman("CK", DorfmanKind::Bott) });
    checks(&mut s, &["courant-axioms", "bott-dorfman", "predual", "dorfman-axioms", "curvature-tensorial"], Expect::Pass);
    s
}

/// Flat rank-1 connection over R², `F = span ∂1`. With `broken`, `K` is
/// spanned by `dx1` instead of `dx2`.
fn foliation(broken: bool) -> StructureSpec {
    let mut s = base(&["x1", "x2"]);
    bundle(&mut s, "E", &["e"]);
    subbundle(&mut s, "U", 3, rows(&[&["1", "0", "0"], &["0", "0", "1"]]));
    let k: &[&str] = if broken { &["0", "1", "0"] } else { &["0", "0", "1"] };
    subbundle(&mut s, "K", 3, rows(&[k]));
    s.dorfman.insert("D".into(), DorfmanSpec { u: Some("U".into()), k: Some("K".into()), ..dorfman("E", DorfmanKind::Standard) });
    if broken {
        checks(&mut s, &["dirac"], Expect::Fail);
    } else {
        checks(&mut s, &["dorfman-axioms", "splitting-theorems", "dirac", "geometric-dirac"], Expect::Pass);
    }
    s
}

fn im2form() -> StructureSpec {
    let mut s = base(&["x1", "x2"]);
    bundle(&mut s, "E", &["dx1", "dx2"]);
    subbundle(&mut s, "U", 4, rows(&[&["1", "0", "-1", "0"], &["0", "1", "0", "-1"]]));
    subbundle(&mut s, "K", 4, rows(&[&["1", "0", "1", "0"], &["0", "1", "0", "1"]]));
    s.dorfman.insert(
        "D".into(),
        DorfmanSpec { sigma: identity(2), u: Some("U".into()), k: Some("K".into()), ..dorfman("E", DorfmanKind::ImForm) },
    );
    checks(&mut s, &["dorfman-axioms", "skew", "splitting-theorems", "dirac", "geometric-dirac", "canonical-form"], Expect::Pass);
    s
}

const CURVED: &[&[&str]] = &[&["0", "x2", "0", "0"], &["x1", "0", "0", "1"]];

fn nonholonomic() -> StructureSpec {
    let mut s = base(&["x1", "x2"]);
    bundle(&mut s, "E", &["dx1", "dx2"]);
    subbundle(&mut s, "U", 4, rows(&[&["1", "0", "-1", "0"]]));
    subbundle(&mut s, "K", 4, rows(&[&["1", "0", "1", "0"], &["0", "1", "0", "0"], &["0", "0", "0", "1"]]));
    s.dorfman.insert(
        "D".into(),
        DorfmanSpec {
            christoffel: rows(CURVED),
            sigma: identity(2),
            u: Some("U".into()),
            k: Some("K".into()),
            ..dorfman("E", DorfmanKind::ImForm)
        },
    );
    checks(&mut s, &["dorfman-axioms", "dirac", "geometric-dirac", "canonical-form"], Expect::Pass);
    s
}

fn linear_poisson() -> StructureSpec {
    let mut s = base(&["x1"]);
    tangent_algebroid(&mut s, 1);
    checks(&mut s, &["lie", "linear-poisson"], Expect::Pass);
    s
}

fn aff1(s: &mut StructureSpec) {
    bundle(s, "g", &["e1", "e2"]);
    s.bracket.insert("A".into(), BracketSpec { bundle: "g".into(), entries: vec![Entry::new(1, 2, &["0", "1"])], ..Default::default() });
}

fn point_bialgebroid() -> StructureSpec {
    let mut s = base(&[]);
    aff1(&mut s);
    subbundle(&mut s, "U", 2, identity(2));
    subbundle(&mut s, "K", 2, vec![]);
    s.dorfman.insert(
        "D".into(),
        DorfmanSpec { algebroid: Some("A".into()), u: Some("U".into()), k: Some("K".into()), ..dorfman("g", DorfmanKind::Symbols) },
    );
    checks(
        &mut s,
        &[
            "lie",
            "linear-poisson",
            "dorfman-axioms",
            "basic-identities",
            "ta-generators",
            "la-dirac",
            "identity-lemmas",
            "k-algebroid",
            "ruth",
            "manin-pair",
            "roundtrip",
            "courant-axioms",
        ],
        Expect::Pass,
    );
    s
}

fn lie_dual_point() -> StructureSpec {
    let mut s = point_bialgebroid();
    bundle(&mut s, "gdual", &["e1*", "e2*"]);
    s.bracket
        .insert("G".into(), BracketSpec { bundle: "gdual".into(), entries: vec![Entry::new(1, 2, &["1", "0"])], ..Default::default() });
    let d = s.dorfman.get_mut("D").expect("declared by point_bialgebroid");
    d.kind = DorfmanKind::Dull;
    d.dull = Some("G".into());
    checks(&mut s, &["lie", "dorfman-axioms", "la-dirac", "identity-lemmas", "ruth", "manin-pair", "roundtrip"], Expect::Pass);
    s
}

fn tangent_la(christoffel: Vec<Vec<String>>, sigma: i64) -> StructureSpec {
    let mut s = base(&["x1", "x2"]);
    tangent_algebroid(&mut s, 2);
    let frame = vec![strs(&["1", "0", "0", &sigma.to_string()]), strs(&["0", "1", &(-sigma).to_string(), "0"])];
    subbundle(&mut s, "U", 4, frame.clone());
    subbundle(&mut s, "K", 4, frame);
    let mut d = DorfmanSpec {
        christoffel,
        algebroid: Some("A".into()),
        u: Some("U".into()),
        k: Some("K".into()),
        ..dorfman("T", DorfmanKind::Standard)
    };
    if sigma != 0 {
        d.kind = DorfmanKind::ImForm;
        d.sigma = vec![strs(&["0", &(-sigma).to_string()]), strs(&[&sigma.to_string(), "0"])];
    }
    s.dorfman.insert("D".into(), d);
    s
}

fn tangent_r2() -> StructureSpec {
    let mut s = tangent_la(vec![], 0);
    checks(
        &mut s,
        &[
            "lie",
            "linear-poisson",
            "basic-identities",
            "ta-generators",
            "la-dirac",
            "identity-lemmas",
            "k-algebroid",
            "ruth",
            "manin-pair",
            "roundtrip",
            "standard-iso",
            "courant-axioms",
        ],
        Expect::Pass,
    );
    s
}

fn im2form_la() -> StructureSpec {
    let mut s = tangent_la(rows(CURVED), 1);
    checks(
        &mut s,
        &[
            "dorfman-axioms",
            "basic-identities",
            "ta-generators",
            "la-dirac",
            "identity-lemmas",
            "k-algebroid",
            "ruth",
            "manin-pair",
            "roundtrip",
            "standard-iso",
            "canonical-form",
        ],
        Expect::Pass,
    );
    s
}

fn neg_axiom_c() -> StructureSpec {
    let mut s = tangent_la(vec![], 0);
    s.dorfman.get_mut("D").expect("declared by tangent_la").perturb = vec![Entry::new(1, 2, &["0", "0", "0", "x1"])];
    checks(&mut s, &["dorfman-axioms", "identity-lemmas"], Expect::Fail);
    s
}

fn neg_la_dirac() -> StructureSpec {
    let mut s = point_bialgebroid();
    subbundle(&mut s, "U", 2, rows(&[&["0", "1"]]));
    subbundle(&mut s, "K", 2, rows(&[&["1", "0"]]));
    checks(&mut s, &["la-dirac", "k-algebroid", "manin-pair"], Expect::Fail);
    s
}

/// Writes Courant data back as a `kind = "courant"` bracket section.
fn courant_section(spec: &mut StructureSpec, name: &str, bundle_name: &str, c: &CourantData) {
    let r = c.rank();
    let show = |p: &courant_core::Poly| p.to_string();
    let frame: Vec<String> = (1..=r).map(|i| format!("c{i}")).collect();
    spec.bundle.insert(bundle_name.into(), BundleSpec { frame });
    let mut entries = Vec::new();
    for i in 0..r {
        for j in 0..r {
            let v = c.structure(i, j);
            if !v.is_zero() {
                entries.push(Entry { i: i + 1, j: j + 1, value: v.comps().iter().map(show).collect() });
            }
        }
    }
    let pairing = c.pairing_matrix().entries.iter().map(|row| row.iter().map(show).collect()).collect();
    if c.anchor().rows > 0 {
        let matrix = c.anchor().entries.iter().map(|row| row.iter().map(show).collect()).collect();
        spec.anchor.insert(name.into(), AnchorSpec { bundle: bundle_name.into(), matrix });
    }
    spec.bracket.insert(
        name.into(),
        BracketSpec { bundle: bundle_name.into(), kind: BracketKind::Courant, pairing, entries, ..Default::default() },
    );
}

fn neg_manin() -> StructureSpec {
    let mut s = point_bialgebroid();
    let model = Model::build(&s, None).expect("the catalog entry is well formed");
    let d = &model.dorfmans["D"];
    let battery = Battery::new(&model.ring, DEFAULT_SEED);
    let la = LieAlgebroidData::new(model.algebroids["A"].clone(), &battery).expect("aff(1) is a Lie algebra");
    let m = build_manin_pair(&la, d.triple.as_ref().expect("declared triple"), &battery).expect("point-bialgebroid is LA-Dirac");
    // frame e1*+0, e2*+0, 0+e1, 0+e2: drop [[0+e1, 0+e2]] and its mirror
    let zero = courant_core::Section::zero(&model.ring, m.rank());
    let broken = m.courant().with_structure(2, 3, zero.clone()).with_structure(3, 2, zero);
    courant_section(&mut s, "C", "CC", &broken);
    s.bracket.get_mut("C").expect("just inserted").presents = Some("D".into());
    checks(&mut s, &["a-manin", "roundtrip"], Expect::Fail);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{parse_spec_str, to_toml};

    #[test]
    fn every_entry_builds_and_round_trips() {
        for name in names() {
            let spec = catalog(name).unwrap();
            let text = to_toml(&spec);
            let again = parse_spec_str(&text).unwrap_or_else(|e| panic!("{name}: {e}\n{text}"));
            assert_eq!(again, spec, "{name}");
            Model::build(&again, Some(&text)).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(!spec.checks.run.is_empty());
        }
    }

    #[test]
    fn unknown_names_yield_nothing() {
        assert!(catalog("ex-z").is_none());
    }
}
