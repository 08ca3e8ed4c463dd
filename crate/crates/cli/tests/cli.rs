use std::io::Write;
use std::process::{Command, Output, Stdio};

fn lab(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_courant-lab"))
        .args(args)
        .env_remove("COURANT_LAB_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    let mut pipe = child.stdin.take().expect("stdin is piped");
    pipe.write_all(stdin.unwrap_or("").as_bytes()).expect("stdin accepts input");
    drop(pipe);
    child.wait_with_output().expect("binary finishes")
}

fn catalog(name: &str) -> String {
    let out = lab(&["catalog", name], None);
    assert!(out.status.success(), "catalog {name} failed");
    String::from_utf8(out.stdout).unwrap()
}

fn run_json(spec: &str, checks: &str) -> (i32, serde_json::Value) {
    let out = lab(&["run", "--format", "json", "--check", checks], Some(spec));
    let json = serde_json::from_slice(&out.stdout).expect("run emits JSON");
    (out.status.code().unwrap(), json)
}

#[test]
fn im2form_triple_is_dirac_through_a_pipe() {
    let (code, json) = run_json(&catalog("im2form"), "dirac");
    assert_eq!(code, 0);
    assert_eq!(json["status"], "pass");
    assert_eq!(json["results"][0]["check"], "dirac");
    assert_eq!(json["results"][0]["target"], "D");
}

#[test]
fn point_bialgebroid_gives_a_manin_pair() {
    let (code, json) = run_json(&catalog("point-bialgebroid"), "la-dirac,manin-pair,roundtrip");
    assert_eq!(code, 0, "{json}");
    let statuses: Vec<&str> = json["results"].as_array().unwrap().iter().map(|r| r["status"].as_str().unwrap()).collect();
    assert_eq!(statuses, ["pass", "pass", "pass"]);
}

#[test]
fn broken_courant_table_fails_with_a_witness() {
    let (code, json) = run_json(&catalog("neg-courant"), "courant-axioms");
    assert_eq!(code, 1);
    assert_eq!(json["status"], "fail");
    let text = json.to_string();
    assert!(text.contains("\"difference\""), "a witness is reported");
}

#[test]
fn text_report_names_the_failing_identity() {
    let out = lab(&["run", "-"], Some(&catalog("neg-axiom-c")));
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("overall: fail"));
    assert!(text.contains("difference:"));
}

#[test]
fn spec_file_path_is_accepted() {
    let path = std::env::temp_dir().join(format!("courant-lab-{}.toml", std::process::id()));
    std::fs::write(&path, catalog("foliation")).unwrap();
    let out = lab(&["run", path.to_str().unwrap()], None);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn syntax_errors_exit_with_usage_code_and_position() {
    let out = lab(&["run"], Some("name = \"x\"\n[patch\n"));
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn bad_polynomial_is_located() {
    let spec = catalog("ex-a").replace("[\"x1\"]]", "[\"x1 +\"]]");
    let out = lab(&["run"], Some(&spec));
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 14, column 25"), "{err}");
}

#[test]
fn unknown_check_and_entry_are_usage_errors() {
    let out = lab(&["run", "--check", "no-such-check"], Some(&catalog("ex-a")));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("no-such-check"));
    assert_eq!(lab(&["catalog", "no-such-entry"], None).status.code(), Some(2));
    assert_eq!(lab(&["frobnicate"], None).status.code(), Some(2));
}

#[test]
fn listings_cover_catalog_and_checks() {
    let out = lab(&["catalog"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in courant_lab::catalog::names() {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
    let out = lab(&["checks"], None);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), courant_lab::CHECKS.len());
}

#[test]
fn seed_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_courant-lab"))
        .args(["run", "--format", "json", "--check", "predual"])
        .env("COURANT_LAB_SEED", "7")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .and_then(|mut c| {
            c.stdin.take().unwrap().write_all(catalog("ex-a").as_bytes())?;
            c.wait_with_output()
        })
        .unwrap();
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["seed"], 7);
}
