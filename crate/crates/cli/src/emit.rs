//! Text tables and JSON documents for run and verify-all results.
//!
//! JSON schema (`run`):
//!
//! ```text
//! { "spec": string, "seed": u64, "status": "pass" | "fail",
//!   "results": [ { "check", "target", "anchor", "status", "report" } ] }
//! ```
//!
//! `report` is a `CheckReport`: `check`, `anchor`, `status`, and when
//! non-empty `witnesses` (`label`, `inputs`, `difference`, all printed
//! polynomials), `suppressed`, `labels`, `notes` and nested `parts`.
//! `verify-all` wraps one such result list per catalog entry together with
//! `name`, `expect`, `outcome` and `matched`.

use std::fmt::Write as _;

use courant_core::{CheckReport, Status};
use serde::Serialize;

use crate::checks::CheckResult;
use crate::spec::Expect;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunOutput {
    pub spec: String,
    pub seed: u64,
    pub status: Status,
    pub results: Vec<CheckResult>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyEntry {
    pub name: String,
    pub expect: Expect,
    pub outcome: Status,
    pub matched: bool,
    pub results: Vec<CheckResult>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyOutput {
    pub seed: u64,
    pub status: Status,
    pub entries: Vec<VerifyEntry>,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let last = cells.len() - 1;
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i == last {
                s.push_str(cell);
            } else {
                let pad = w - cell.chars().count();
                s.push_str(cell);
                s.push_str(&" ".repeat(pad + 2));
            }
        }
        s.trim_end().to_string()
    };
    let _ = writeln!(out, "{}", line(header.to_vec()));
    for row in rows {
        let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
    }
}

fn details(out: &mut String, report: &CheckReport, path: &str, indent: usize) {
    let here = if path.is_empty() || path.rsplit('/').next() == Some(report.check.as_str()) {
        if path.is_empty() {
            report.check.clone()
        } else {
            path.to_string()
        }
    } else {
        format!("{path}/{}", report.check)
    };
    let pad = " ".repeat(indent);
    for w in &report.witnesses {
        let _ = writeln!(out, "{pad}{here}: {}", w.label);
        if !w.inputs.is_empty() {
            let _ = writeln!(out, "{pad}  inputs: {}", w.inputs.join(", "));
        }
        let _ = writeln!(out, "{pad}  difference: {}", w.difference);
    }
    if report.suppressed > 0 {
        let _ = writeln!(out, "{pad}{here}: {} further failures not shown", report.suppressed);
    }
    if report.status != Status::Pass {
        for n in &report.notes {
            let _ = writeln!(out, "{pad}{here}: note: {n}");
        }
    }
    for p in &report.parts {
        if p.status != Status::Pass {
            details(out, p, &here, indent);
        }
    }
}

fn counts(results: &[CheckResult]) -> String {
    let n = |s: Status| results.iter().filter(|r| r.status == s).count();
    format!("{} pass, {} fail, {} not-applicable, {} error", n(Status::Pass), n(Status::Fail), n(Status::NotApplicable), n(Status::Error))
}

fn results_text(out: &mut String, results: &[CheckResult]) {
    let rows: Vec<Vec<String>> =
        results.iter().map(|r| vec![r.check.clone(), r.target.clone(), r.status.to_string(), r.anchor.clone()]).collect();
    table(out, &["CHECK", "TARGET", "STATUS", "ANCHOR"], &rows);
    let bad: Vec<&CheckResult> = results.iter().filter(|r| r.status != Status::Pass).collect();
    if !bad.is_empty() {
        let _ = writeln!(out);
        for r in bad {
            let _ = writeln!(out, "{} [{}]: {}", r.check, r.target, r.status);
            details(out, &r.report, "", 2);
        }
    }
}

pub fn emit_run(output: &RunOutput, format: Format) -> String {
    match format {
        Format::Json => json(output),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "courant-lab run: {} (seed {})", output.spec, output.seed);
            let _ = writeln!(out);
            results_text(&mut out, &output.results);
            let _ = writeln!(out);
            let _ = writeln!(out, "overall: {} ({})", output.status, counts(&output.results));
            out
        }
    }
}

pub fn emit_verify(output: &VerifyOutput, format: Format) -> String {
    match format {
        Format::Json => json(output),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "courant-lab verify-all (seed {})", output.seed);
            let _ = writeln!(out);
            let rows: Vec<Vec<String>> = output
                .entries
                .iter()
                .map(|e| {
                    let expect = match e.expect {
                        Expect::Pass => "pass",
                        Expect::Fail => "fail",
                    };
                    vec![
                        e.name.clone(),
                        expect.to_string(),
                        e.outcome.to_string(),
                        if e.matched { "yes" } else { "NO" }.to_string(),
                        counts(&e.results),
                    ]
                })
                .collect();
            table(&mut out, &["ENTRY", "EXPECT", "OUTCOME", "AS EXPECTED", "CHECKS"], &rows);
            for e in output.entries.iter().filter(|e| !e.matched) {
                let _ = writeln!(out);
                let _ = writeln!(out, "== {} ==", e.name);
                results_text(&mut out, &e.results);
            }
            let matched = output.entries.iter().filter(|e| e.matched).count();
            let _ = writeln!(out);
            let _ = writeln!(out, "overall: {} ({matched} of {} entries as expected)", output.status, output.entries.len());
            out
        }
    }
}
