//! Structured check results with symbolic witnesses.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Witnesses kept per identity label; further failures are only counted.
pub const WITNESS_CAP: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not-applicable",
            Status::Error => "error",
        }
    }

    pub fn parse(s: &str) -> Option<Status> {
        match s {
            "pass" => Some(Status::Pass),
            "fail" => Some(Status::Fail),
            "not-applicable" => Some(Status::NotApplicable),
            "error" => Some(Status::Error),
            _ => None,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One failing instance of an identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub inputs: Vec<String>,
    pub difference: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub anchor: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    /// Failures beyond the witness cap.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub suppressed: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<CheckReport>,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl CheckReport {
    pub fn new(check: &str, anchor: &str, status: Status) -> CheckReport {
        CheckReport {
            check: check.to_string(),
            anchor: anchor.to_string(),
            status,
            witnesses: Vec::new(),
            suppressed: 0,
            labels: Vec::new(),
            notes: Vec::new(),
            parts: Vec::new(),
        }
    }

    pub fn not_applicable(check: &str, anchor: &str, reason: impl Into<String>) -> CheckReport {
        let mut r = CheckReport::new(check, anchor, Status::NotApplicable);
        r.notes.push(reason.into());
        r
    }

    pub fn error(check: &str, anchor: &str, reason: impl Into<String>) -> CheckReport {
        let mut r = CheckReport::new(check, anchor, Status::Error);
        r.notes.push(reason.into());
        r
    }

    /// A report whose status is `fail` if any part fails, `error` if any part
    /// errors (and none fails), `pass` otherwise. Not-applicable parts are
    /// neutral unless every part is not-applicable.
    pub fn combine(check: &str, anchor: &str, parts: Vec<CheckReport>) -> CheckReport {
        let status = if parts.iter().any(|p| p.status == Status::Fail) {
            Status::Fail
        } else if parts.iter().any(|p| p.status == Status::Error) {
            Status::Error
        } else if !parts.is_empty() && parts.iter().all(|p| p.status == Status::NotApplicable) {
            Status::NotApplicable
        } else {
            Status::Pass
        };
        let mut r = CheckReport::new(check, anchor, status);
        r.parts = parts;
        r
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_note(mut self, note: impl Into<String>) -> CheckReport {
        self.notes.push(note.into());
        self
    }

    /// Find a sub-report by check name, searching depth first.
    pub fn part(&self, check: &str) -> Option<&CheckReport> {
        if self.check == check {
            return Some(self);
        }
        self.parts.iter().find_map(|p| p.part(check))
    }

    /// All witnesses in this report and its parts.
    pub fn all_witnesses(&self) -> Vec<&Witness> {
        let mut out: Vec<&Witness> = self.witnesses.iter().collect();
        for p in &self.parts {
            out.extend(p.all_witnesses());
        }
        out
    }
}

/// Accumulates comparisons for one check and produces a [`CheckReport`].
#[derive(Debug)]
pub struct Checker {
    report: CheckReport,
    per_label: std::collections::BTreeMap<String, usize>,
    failures: usize,
}

impl Checker {
    pub fn new(check: &str, anchor: &str) -> Checker {
        Checker { report: CheckReport::new(check, anchor, Status::Pass), per_label: Default::default(), failures: 0 }
    }

    /// Record a comparison. `difference` is printed only on failure.
    pub fn expect_zero<D: fmt::Display>(&mut self, label: &str, zero: bool, inputs: &[String], difference: D) -> bool {
        if !zero {
            self.fail(label, inputs, difference.to_string());
        }
        zero
    }

    pub fn fail(&mut self, label: &str, inputs: &[String], difference: String) {
        self.failures += 1;
        let count = self.per_label.entry(label.to_string()).or_insert(0);
        if *count < WITNESS_CAP {
            self.report.witnesses.push(Witness { label: label.to_string(), inputs: inputs.to_vec(), difference });
        } else {
            self.report.suppressed += 1;
        }
        *count += 1;
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.report.notes.push(note.into());
    }

    pub fn label(&mut self, label: impl Into<String>) {
        self.report.labels.push(label.into());
    }

    pub fn failures(&self) -> usize {
        self.failures
    }

    pub fn finish(mut self) -> CheckReport {
        self.report.status = if self.failures > 0 { Status::Fail } else { Status::Pass };
        self.report
    }
}

/// Render a list of sections for witness inputs.
pub fn show<T: fmt::Display>(items: &[&T]) -> Vec<String> {
    items.iter().map(|x| x.to_string()).collect()
}
