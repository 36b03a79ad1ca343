//! Machine-readable run reports.
//!
//! Every document carries `"schema": 1` and serializes big integers as
//! decimal strings (the certifying denominators overflow any machine word).
//! Content is deterministic for a fixed configuration and input range with
//! two documented exceptions: `meta.timestamp` and the `timing` section are
//! wall-clock measurements. [`SweepReport::deterministic_view`] blanks both
//! so callers can compare runs.

use crate::reduction::{ReductionCertificate, SweepCaseResult};
use crate::search::SolutionRecord;
use serde::{Deserialize, Serialize};

/// Version stamp of the report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// What the run was asked to do: the resolved knobs after merging the
/// config file and command-line flags.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    /// Starting working precision; None lets each case pick its heuristic.
    pub default_prec_bits: Option<u32>,
    pub prec_cap_bits: u32,
    pub max_convergents: usize,
    /// Requested worker count; None defers to the runtime default.
    pub jobs: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    /// Crate version that produced the document.
    pub version: String,
    /// RFC 3339 wall-clock time; excluded from determinism guarantees.
    pub timestamp: String,
    pub config: ConfigSnapshot,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseFailure {
    pub n: u32,
    pub j: u8,
    pub error: String,
}

/// Wall-clock cost of one case; excluded from determinism guarantees.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseTiming {
    pub n: u32,
    pub j: u8,
    pub millis: u64,
}

/// Full record of one sweep run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema: u32,
    pub meta: ReportMeta,
    pub from: u32,
    pub to: u32,
    /// Certificates of the cases that reduced, sorted by (n, type).
    pub cases: Vec<ReductionCertificate>,
    /// Cases that failed to reduce, sorted by (n, type).
    pub failures: Vec<CaseFailure>,
    /// Every solution any certificate enumerated (trivial ones included);
    /// the run is clean only when none of these is non-trivial.
    pub solutions: Vec<SolutionRecord>,
    pub timing: Vec<CaseTiming>,
}

impl SweepReport {
    pub fn build(
        from: u32,
        to: u32,
        config: ConfigSnapshot,
        results: Vec<SweepCaseResult>,
    ) -> SweepReport {
        let mut cases = Vec::new();
        let mut failures = Vec::new();
        let mut solutions: Vec<SolutionRecord> = Vec::new();
        let mut timing = Vec::new();
        for r in results {
            timing.push(CaseTiming {
                n: r.n,
                j: r.j,
                millis: r.millis,
            });
            match r.outcome {
                Ok(cert) => {
                    solutions.extend(cert.solutions_found.iter().cloned());
                    cases.push(cert);
                }
                Err(e) => failures.push(CaseFailure {
                    n: r.n,
                    j: r.j,
                    error: e.to_string(),
                }),
            }
        }
        SweepReport {
            schema: SCHEMA_VERSION,
            meta: ReportMeta {
                version: env!("CARGO_PKG_VERSION").to_string(),
                timestamp: chrono::Utc::now().to_rfc3339(),
                config,
            },
            from,
            to,
            cases,
            failures,
            solutions,
            timing,
        }
    }

    /// True when every case reduced and nothing non-trivial was enumerated:
    /// the exit-0 condition of a sweep.
    pub fn clean(&self) -> bool {
        self.failures.is_empty() && self.solutions.iter().all(|s| s.trivial)
    }

    /// The report with its wall-clock fields blanked; two runs with the same
    /// configuration and range compare equal through this view.
    pub fn deterministic_view(&self) -> SweepReport {
        let mut v = self.clone();
        v.meta.timestamp = String::new();
        for t in &mut v.timing {
            t.millis = 0;
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::{reduce_case, sweep_range, ReduceOptions};

    fn sample_report() -> SweepReport {
        let results = sweep_range(29, 29, &ReduceOptions::default());
        SweepReport::build(
            29,
            29,
            ConfigSnapshot {
                prec_cap_bits: 1 << 20,
                max_convergents: 10_000,
                ..ConfigSnapshot::default()
            },
            results,
        )
    }

    #[test]
    fn report_roundtrips_losslessly() {
        let rep = sample_report();
        assert_eq!(rep.schema, 1);
        assert_eq!(rep.cases.len(), 3);
        assert!(rep.failures.is_empty());
        assert!(rep.clean());
        let text = serde_json::to_string_pretty(&rep).unwrap();
        let back: SweepReport = serde_json::from_str(&text).unwrap();
        assert_eq!(rep, back);
    }

    #[test]
    fn deterministic_view_is_stable_across_runs() {
        let a = sample_report();
        let b = sample_report();
        assert_ne!(a.meta.timestamp, ""); // the raw field is real wall-clock data
        assert_eq!(a.deterministic_view(), b.deterministic_view());
    }

    #[test]
    fn failures_are_reported_not_dropped() {
        // a precision cap too small to certify anything
        let opts = ReduceOptions {
            start_prec: Some(16),
            prec_cap: 32,
            max_convergents: 10_000,
        };
        let results = sweep_range(29, 29, &opts);
        let rep = SweepReport::build(29, 29, ConfigSnapshot::default(), results);
        assert_eq!(rep.cases.len() + rep.failures.len(), 3);
        assert!(!rep.failures.is_empty());
        assert!(!rep.clean());
    }

    #[test]
    fn big_integers_serialize_as_decimal_strings() {
        let cert = reduce_case(29, 3, &ReduceOptions::default()).unwrap();
        let v = serde_json::to_value(&cert).unwrap();
        assert!(v["q"].is_string());
        assert!(v["y_bound"].is_string());
        assert_eq!(v["y_bound"].as_str().unwrap().parse::<u64>().unwrap(), {
            use num_traits::ToPrimitive;
            cert.y_bound.to_u64().unwrap()
        });
    }
}
