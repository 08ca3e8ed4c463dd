//! Spec parsing, check orchestration, the example catalog and report
//! emission behind the `courant-lab` binary.

pub mod catalog;
pub mod checks;
pub mod emit;
pub mod model;
pub mod spec;

use courant_core::Status;
use thiserror::Error;

pub use checks::{CheckResult, CHECKS};
pub use emit::{emit_run, emit_verify, Format, RunOutput, VerifyEntry, VerifyOutput};
pub use model::Model;
pub use spec::{parse_spec, parse_spec_str, to_toml, Expect, SpecError, StructureSpec};

/// Environment variable consulted when `--seed` is absent.
pub const SEED_ENV: &str = "COURANT_LAB_SEED";

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Run(#[from] checks::RunError),
    #[error("unknown catalog entry '{0}'")]
    UnknownEntry(String),
}

/// Builds a structure and runs `checks`, falling back to its own
/// `[checks] run` list and then to every registered check.
pub fn run_spec(spec: &StructureSpec, source: Option<&str>, checks: &[String], seed: u64) -> Result<RunOutput, LabError> {
    let selection = if checks.is_empty() { spec.checks.run.clone() } else { checks.to_vec() };
    checks::resolve(&selection)?;
    let model = Model::build(spec, source)?;
    let results = checks::run(&model, &selection, seed)?;
    Ok(RunOutput { spec: spec.name.clone(), seed, status: checks::overall(&results), results })
}

fn verify_entry(name: &str, seed: u64) -> Result<VerifyEntry, LabError> {
    let spec = catalog::catalog(name).ok_or_else(|| LabError::UnknownEntry(name.to_string()))?;
    let run = run_spec(&spec, None, &[], seed)?;
    let expect = spec.checks.expect;
    let matched = match expect {
        Expect::Pass => run.status == Status::Pass,
        // a negative control must fail with at least one symbolic witness
        Expect::Fail => {
            run.status == Status::Fail && run.results.iter().any(|r| r.status == Status::Fail && !r.report.all_witnesses().is_empty())
        }
    };
    Ok(VerifyEntry { name: name.to_string(), expect, outcome: run.status, matched, results: run.results })
}

/// Runs every catalog entry with its default checks, one thread per entry;
/// entries are reported in catalog order.
pub fn verify_all(seed: u64) -> Result<VerifyOutput, LabError> {
    let names: Vec<&str> = catalog::names().collect();
    let entries = std::thread::scope(|scope| {
        let handles: Vec<_> = names.iter().map(|n| scope.spawn(move || verify_entry(n, seed))).collect();
        handles.into_iter().map(|h| h.join().expect("verification threads do not panic")).collect::<Result<Vec<_>, _>>()
    })?;
    let status = if entries.iter().all(|e| e.matched) { Status::Pass } else { Status::Fail };
    Ok(VerifyOutput { seed, status, entries })
}
