//! Pass/fail records for verified identities.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub identity: String,
    /// Short label of the formula being checked.
    pub anchor: String,
    pub params: BTreeMap<String, String>,
    #[serde(rename = "N")]
    pub n: usize,
    pub status: Status,
    pub max_residual: String,
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// What a single check produced.
#[derive(Clone, Debug)]
pub enum Outcome {
    /// Passes iff every entry is exactly zero.
    Residuals(Vec<Scalar>),
    /// A structural or boolean claim.
    Predicate { holds: bool, detail: String },
    /// A convergence ladder; `error` is the last-rung error.
    Ladder {
        passed: bool,
        error: Scalar,
        detail: String,
    },
}

impl Outcome {
    pub fn residual(r: Scalar) -> Self {
        Outcome::Residuals(vec![r])
    }

    pub fn predicate(holds: bool, detail: impl Into<String>) -> Self {
        Outcome::Predicate {
            holds,
            detail: detail.into(),
        }
    }

    /// Residuals gathered from a fallible grid.
    pub fn from_grid<I>(cells: I) -> Result<Self>
    where
        I: IntoIterator<Item = Result<Scalar>>,
    {
        Ok(Outcome::Residuals(
            cells.into_iter().collect::<Result<Vec<_>>>()?,
        ))
    }
}

fn max_abs(values: &[Scalar]) -> Scalar {
    values
        .iter()
        .map(Scalar::abs)
        .fold(Scalar::zero(), |m, x| if x > m { x } else { m })
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(CheckRecord::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.passed())
    }

    pub fn get(&self, identity: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.identity == identity)
    }

    /// Sorts by identity, then parameters, then `N`.
    pub fn sort(&mut self) {
        self.records.sort_by(|a, b| {
            (&a.identity, &a.params, a.n, &a.anchor).cmp(&(&b.identity, &b.params, b.n, &b.anchor))
        });
    }

    pub fn zero_timings(&mut self) {
        for r in &mut self.records {
            r.elapsed_ms = 0;
        }
    }
}

/// Runs checks for one parameter point and collects their records.
pub struct Recorder {
    params: BTreeMap<String, String>,
    n: usize,
    report: VerificationReport,
}

impl Recorder {
    pub fn new(params: BTreeMap<String, String>, n: usize) -> Self {
        Recorder {
            params,
            n,
            report: VerificationReport::new(),
        }
    }

    /// Times `f` and records its outcome. An error fails the check and is
    /// kept in `detail`.
    pub fn run(&mut self, identity: &str, anchor: &str, f: impl FnOnce() -> Result<Outcome>) {
        let start = Instant::now();
        let outcome = f();
        let elapsed_ms = start.elapsed().as_millis() as u64;
        let (status, max_residual, detail) = match outcome {
            Ok(Outcome::Residuals(values)) => {
                let worst = max_abs(&values);
                let ok = values.iter().all(Scalar::is_zero);
                (ok, worst.to_string(), None)
            }
            Ok(Outcome::Predicate { holds, detail }) => (
                holds,
                if holds { "0".into() } else { "1".into() },
                Some(detail).filter(|d| !d.is_empty()),
            ),
            Ok(Outcome::Ladder {
                passed,
                error,
                detail,
            }) => (passed, error.to_string(), Some(detail)),
            Err(e) => (false, "error".into(), Some(e.to_string())),
        };
        self.report.records.push(CheckRecord {
            identity: identity.to_string(),
            anchor: anchor.to_string(),
            params: self.params.clone(),
            n: self.n,
            status: if status { Status::Pass } else { Status::Fail },
            max_residual,
            elapsed_ms,
            detail,
        });
    }

    pub fn finish(self) -> VerificationReport {
        self.report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn residual_status_and_schema() {
        let mut rec = Recorder::new(BTreeMap::from([("q".to_string(), "3/5".to_string())]), 3);
        rec.run("b.zero", "label", || {
            Ok(Outcome::Residuals(vec![Scalar::zero(), Scalar::zero()]))
        });
        rec.run("a.nonzero", "label", || {
            Ok(Outcome::Residuals(vec![
                Scalar::ratio(-1, 2),
                Scalar::ratio(1, 3),
            ]))
        });
        rec.run("c.err", "label", || Err(Error::Singular));
        let mut rep = rec.finish();
        rep.sort();
        assert_eq!(rep.records[0].identity, "a.nonzero");
        assert_eq!(rep.records[0].max_residual, "1/2");
        assert!(!rep.all_pass());
        assert_eq!(rep.failures().count(), 2);
        let v = serde_json::to_value(&rep.records[1]).unwrap();
        for key in [
            "identity",
            "anchor",
            "params",
            "N",
            "status",
            "max_residual",
            "elapsed_ms",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["status"], "pass");
    }
}
