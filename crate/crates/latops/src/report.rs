//! Deterministic pass/fail reports produced by the verification suites.

use std::collections::BTreeMap;

use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub n: i64,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

/// One named check over an index range. Failures always carry a witness;
/// passes may carry one when the verified claim *is* a witness (the
/// non-existence checks).
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub range: (i64, i64),
    pub status: Status,
    pub witness: Option<Witness>,
}

impl Check {
    pub fn pass(name: impl Into<String>, range: (i64, i64)) -> Self {
        Check {
            name: name.into(),
            range,
            status: Status::Pass,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, range: (i64, i64), witness: Witness) -> Self {
        Check {
            name: name.into(),
            range,
            status: Status::Fail,
            witness: Some(witness),
        }
    }

    pub fn pass_with_witness(name: impl Into<String>, range: (i64, i64), witness: Witness) -> Self {
        Check {
            name: name.into(),
            range,
            status: Status::Pass,
            witness: Some(witness),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<Check>,
    /// Headline values worth surfacing (e.g. "C1" of a family).
    pub meta: BTreeMap<String, String>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report {
            subject: subject.into(),
            checks: Vec::new(),
            meta: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn set_meta(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.meta.insert(key.into(), value.into());
    }

    pub fn merge(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.meta.extend(other.meta);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    /// Checks sorted by (name, range start) for deterministic output.
    pub fn sorted_checks(&self) -> Vec<&Check> {
        let mut v: Vec<&Check> = self.checks.iter().collect();
        v.sort_by(|a, b| a.name.cmp(&b.name).then(a.range.0.cmp(&b.range.0)));
        v
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .sorted_checks()
            .iter()
            .map(|c| {
                let mut obj = json!({
                    "name": c.name,
                    "range": [c.range.0, c.range.1],
                    "status": match c.status {
                        Status::Pass => "pass",
                        Status::Fail => "fail",
                    },
                });
                if let Some(w) = &c.witness {
                    obj["witness"] = json!({"n": w.n, "lhs": w.lhs, "rhs": w.rhs});
                }
                obj
            })
            .collect();
        let mut out = json!({
            "subject": self.subject,
            "checks": checks,
        });
        if !self.meta.is_empty() {
            out["meta"] = json!(self.meta);
        }
        out
    }
}
