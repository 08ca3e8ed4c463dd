//! Acceptance criteria 1-10, one printed line each.
//!
//! The lines go straight to stdout, past the test harness's output capture,
//! so they appear in a plain `cargo test` run. The test fails if any
//! criterion fails.

use std::io::Write;
use std::process::Command;
use std::time::Instant;

use courant_core::battery::{Battery, DEFAULT_SEED};
use courant_core::dorfman::{standard_curvature_closed_form, Christoffel};
use courant_core::prolong::{canonical_form_check, lift_linear, total_courant, verify_splitting_theorems, TotalPatch};
use courant_core::{CheckReport, Mat, Ring, Section, Status};
use courant_lab::{catalog, run_spec, CheckResult, Model};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn entry_results(name: &str, checks: &[&str]) -> Result<Vec<CheckResult>, String> {
    let spec = catalog::catalog(name).ok_or(format!("no catalog entry {name}"))?;
    let checks: Vec<String> = checks.iter().map(|s| s.to_string()).collect();
    let out = run_spec(&spec, None, &checks, DEFAULT_SEED).map_err(|e| e.to_string())?;
    Ok(out.results)
}

fn all_pass(name: &str, checks: &[&str]) -> Result<usize, String> {
    let results = entry_results(name, checks)?;
    for r in &results {
        ensure(r.status == Status::Pass, format!("{name}: {} [{}] is {}", r.check, r.target, r.status))?;
    }
    Ok(results.len())
}

fn ex_a_model() -> Result<Model, String> {
    Model::build(&catalog::catalog("ex-a").ok_or("no ex-a")?, None).map_err(|e| e.to_string())
}

fn criterion_1() -> Outcome {
    let model = ex_a_model()?;
    let decl = &model.dorfmans["D"];
    let delta = &decl.delta;
    let nabla = decl.nabla.as_ref().ok_or("ex-a has a connection")?;
    let ring = &model.ring;
    let unit = |i| Section::unit(ring, 3, i);
    let (d1, d2, eps) = (unit(0), unit(1), unit(2));
    // (ε,0) sits in B = E⊕T*M at index 0; Q = TM⊕E* puts ∂1,∂2 first
    let e0 = unit(0);
    let direct = &(&delta.apply(&d1, &delta.apply(&d2, &e0)) - &delta.apply(&d2, &delta.apply(&d1, &e0)))
        - &delta.apply(&delta.bracket().bracket(&d1, &d2), &e0);
    ensure(direct == e0, format!("R((d1,0),(d2,0))(e,0) = {direct}, expected {e0}"))?;
    ensure(delta.curvature_apply(&d1, &d2, &e0) == e0, "curvature_apply disagrees with double application")?;
    let frames = [d1, d2, eps];
    let mut pairs = 0;
    for v1 in &frames {
        for v2 in &frames {
            let closed = standard_curvature_closed_form(nabla, v1, v2);
            ensure(delta.curvature(v1, v2) == closed, format!("closed form differs at ({v1}, {v2})"))?;
            pairs += 1;
        }
    }
    Ok(format!("R((d1,0),(d2,0))(e,0) = (e,0); closed form agrees on {pairs} frame pairs"))
}

fn criterion_2() -> Outcome {
    let n = all_pass("ex-a", &["curvature-jacobiator", "curvature-tensorial"])?;
    Ok(format!("{n} checks pass on frame triples and battery"))
}

fn criterion_3() -> Outcome {
    let model = ex_a_model()?;
    let delta = &model.dorfmans["D"].delta;
    let ring = &model.ring;
    let rep = verify_splitting_theorems(delta, &Battery::new(ring, DEFAULT_SEED));
    ensure(rep.passed(), format!("splitting theorems: {:?}", rep.all_witnesses().first().map(|w| &w.label)))?;
    let tp = TotalPatch::new(ring, 1);
    let l1 = lift_linear(&tp, delta, &Section::unit(ring, 3, 0));
    let l2 = lift_linear(&tp, delta, &Section::unit(ring, 3, 1));
    let br = total_courant(&l1, &l2);
    let expect = Section::parse(tp.ring(), &["0", "0", "-1*y1"]).map_err(|e| e.to_string())?;
    ensure(br.vector == expect && br.form.is_zero(), format!("[d1~, d2~] = {}", br.vector))?;
    Ok(format!("{} parts pass; [d1~, d2~] = -y d/dy", rep.parts.len()))
}

fn criterion_4() -> Outcome {
    let mut count = 0;
    for name in ["im2form", "foliation"] {
        count += all_pass(name, &["dirac", "geometric-dirac"])?;
    }
    let results = entry_results("ex-a-full-u", &["dirac", "geometric-dirac"])?;
    let alg = &results[0].report;
    let geo = &results[1].report;
    ensure(alg.status == Status::Fail && geo.status == Status::Fail, "ex-a full-U triple must fail both checks")?;
    let curv = alg.part("dirac").and_then(|r| r.part("dirac-curvature")).ok_or("no curvature part")?;
    let aw = curv.witnesses.first().ok_or("no algebraic witness")?;
    let gw = geo.all_witnesses().into_iter().next().ok_or("no geometric witness")?;
    // both witnesses sit on the pair (d1,0),(d2,0); the geometric defect -y d/dy is minus y times the core lift of R(d1,d2)(e,0) = (e,0)
    ensure(aw.inputs[..2] == ["[1, 0, 0]", "[0, 1, 0]"], format!("algebraic witness inputs {:?}", aw.inputs))?;
    ensure(gw.inputs == ["lin[1, 0, 0]", "lin[0, 1, 0]"], format!("geometric witness inputs {:?}", gw.inputs))?;
    ensure(aw.difference == "[1, 0, 0]" && gw.difference == "([0, 0, -y1], [0, 0, 0])", "witness values differ")?;
    Ok(format!("{count} passing checks on im2form and foliation; full-U triple fails both at (d1,d2)"))
}

fn criterion_5() -> Outcome {
    let mut n = all_pass("point-bialgebroid", &["la-dirac", "courant-axioms", "manin-pair", "a-manin", "roundtrip"])?;
    n += all_pass("tangent-r2", &["la-dirac", "courant-axioms", "manin-pair", "a-manin", "roundtrip", "standard-iso"])?;
    Ok(format!("{n} checks pass on point-bialgebroid and tangent-r2"))
}

fn criterion_6() -> Outcome {
    let mut n = 0;
    for name in ["point-bialgebroid", "tangent-r2"] {
        n += all_pass(name, &["basic-identities", "identity-lemmas"])?;
    }
    Ok(format!("{n} identity suites pass"))
}

fn criterion_7() -> Outcome {
    let n = all_pass("linear-poisson", &["linear-poisson"])?;
    let ring = Ring::numbered("x", 2);
    let rep: CheckReport = canonical_form_check(&Mat::identity(&ring, 2), &Christoffel::flat(&ring, 2), &Battery::new(&ring, DEFAULT_SEED));
    ensure(rep.passed(), "canonical form check fails for sigma = id")?;
    Ok(format!("{n} linear Poisson check and the sigma = id canonical form pass"))
}

fn criterion_8() -> Outcome {
    let mut n = 0;
    for name in ["point-bialgebroid", "tangent-r2"] {
        n += all_pass(name, &["ta-generators"])?;
    }
    Ok(format!("{n} generator checks pass"))
}

fn criterion_9() -> Outcome {
    for name in ["neg-axiom-c", "neg-nonisotropic", "neg-manin"] {
        let spec = catalog::catalog(name).ok_or("missing negative entry")?;
        let out = run_spec(&spec, None, &[], DEFAULT_SEED).map_err(|e| e.to_string())?;
        ensure(out.status == Status::Fail, format!("{name} did not fail"))?;
        ensure(out.results.iter().all(|r| r.status != Status::Error), format!("{name} reported an error"))?;
        let nonzero =
            out.results.iter().flat_map(|r| r.report.all_witnesses()).any(|w| !w.difference.chars().all(|c| "0[](), ".contains(c)));
        ensure(nonzero, format!("{name} has no nonzero witness"))?;
    }
    Ok("three perturbed fixtures fail with nonzero witnesses".into())
}

fn criterion_10() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_courant-lab"))
            .args(["verify-all", "--format", "json"])
            .env_remove("COURANT_LAB_SEED")
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success(), format!("verify-all exited with {}", a.status))?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, "outputs differ")?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("standard Dorfman curvature on ex-a", criterion_1),
        ("curvature equals Jacobiator pairing", criterion_2),
        ("splitting theorems on the total space", criterion_3),
        ("Dirac triples, algebraic and geometric", criterion_4),
        ("LA-Dirac triples and Manin pairs", criterion_5),
        ("basic connection identity suite", criterion_6),
        ("linear Poisson structure and canonical form", criterion_7),
        ("TA generator table and representation up to homotopy", criterion_8),
        ("negative controls", criterion_9),
        ("verify-all determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        let line = match outcome {
            Ok(detail) => format!("criterion {:>2} PASS  {title}: {detail} ({secs:.2}s)\n", i + 1),
            Err(why) => {
                failed += 1;
                format!("criterion {:>2} FAIL  {title}: {why} ({secs:.2}s)\n", i + 1)
            }
        };
        std::io::stdout().lock().write_all(line.as_bytes()).expect("stdout is writable");
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
