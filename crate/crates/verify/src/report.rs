use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};
use siegel_core::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
}

/// One checked instance of an identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseRecord {
    pub id: String,
    pub identity: String,
    pub anchor: String,
    pub verdict: Verdict,
    pub witness: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: Value,
    pub run: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub cases: Vec<CaseRecord>,
}

impl SuiteReport {
    pub fn new(suite: &str, config: Value, mut cases: Vec<CaseRecord>) -> Self {
        cases.sort_by(|a, b| a.id.cmp(&b.id));
        let count = |v: Verdict| cases.iter().filter(|c| c.verdict == v).count();
        Self {
            suite: suite.to_string(),
            config,
            run: cases.len(),
            passed: count(Verdict::Pass),
            failed: count(Verdict::Fail),
            skipped: count(Verdict::Skip),
            cases,
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Result of evaluating one case.
pub struct Outcome {
    pub pass: bool,
    pub witness: Value,
}

impl Outcome {
    pub fn new(pass: bool, witness: Value) -> Self {
        Self { pass, witness }
    }
}

/// Collects case records for one run.
#[derive(Default)]
pub struct Cases {
    pub records: Vec<CaseRecord>,
}

impl Cases {
    /// Runs one case. Precision loss, degenerate samples and unsupported
    /// sizes are reported as skips; any other error is a failure.
    pub fn check(
        &mut self,
        id: impl Into<String>,
        identity: &str,
        anchor: &str,
        f: impl FnOnce() -> Result<Outcome, Error>,
    ) {
        let (verdict, witness) = match f() {
            Ok(o) => (if o.pass { Verdict::Pass } else { Verdict::Fail }, o.witness),
            Err(e) => {
                let skip = matches!(
                    e,
                    Error::PrecisionLoss(_)
                        | Error::Singular
                        | Error::Unsupported(_)
                        | Error::RamificationInsufficient { .. }
                );
                let verdict = if skip { Verdict::Skip } else { Verdict::Fail };
                (verdict, serde_json::json!({ "error": e.to_string() }))
            }
        };
        self.push(id, identity, anchor, verdict, witness);
    }

    pub fn skip(&mut self, id: impl Into<String>, identity: &str, anchor: &str, reason: impl Into<String>) {
        self.push(id, identity, anchor, Verdict::Skip, serde_json::json!({ "reason": reason.into() }));
    }

    fn push(&mut self, id: impl Into<String>, identity: &str, anchor: &str, verdict: Verdict, witness: Value) {
        self.records.push(CaseRecord {
            id: id.into(),
            identity: identity.to_string(),
            anchor: anchor.to_string(),
            verdict,
            witness,
        });
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.records.iter().filter(|r| r.verdict == verdict).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Rebuilds every object with sorted keys.
fn sorted(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sorted(v))).collect::<Map<_, _>>())
        }
        Value::Array(a) => Value::Array(a.into_iter().map(sorted).collect()),
        other => other,
    }
}

/// Serializes any report with stable key order.
pub fn to_sorted_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    let mut out = serde_json::to_string_pretty(&sorted(v)).expect("values serialize");
    out.push('\n');
    out
}

pub fn emit_report(report: &SuiteReport, format: Format) -> String {
    match format {
        Format::Json => to_sorted_json(report),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "suite {}: {} run, {} passed, {} failed, {} skipped",
                report.suite, report.run, report.passed, report.failed, report.skipped
            );
            for case in &report.cases {
                let tag = match case.verdict {
                    Verdict::Pass => "pass",
                    Verdict::Fail => "FAIL",
                    Verdict::Skip => "skip",
                };
                let _ = write!(out, "{tag:4}  {}  {}", case.id, case.identity);
                if case.verdict != Verdict::Pass {
                    let _ = write!(out, "  {}", case.witness);
                }
                out.push('\n');
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid_json() {
        let r = SuiteReport::new("all", serde_json::json!({}), Vec::new());
        let v: Value = serde_json::from_str(&emit_report(&r, Format::Json)).unwrap();
        assert_eq!(v["run"], 0);
        assert_eq!(v["cases"].as_array().unwrap().len(), 0);
    }

    #[test]
    fn single_pass_and_sorted_keys() {
        let mut cases = Cases::default();
        cases.check("a/1", "x = x", "reflexivity", || Ok(Outcome::new(true, serde_json::json!({"z": 1, "a": 2}))));
        let r = SuiteReport::new("series", serde_json::json!({}), cases.records);
        let text = emit_report(&r, Format::Json);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["cases"][0]["verdict"], "pass");
        assert!(text.find("\"a\": 2").unwrap() < text.find("\"z\": 1").unwrap());
    }

    #[test]
    fn errors_map_to_skip_or_fail() {
        let mut cases = Cases::default();
        cases.check("b", "i", "a", || Err(Error::PrecisionLoss("x".into())));
        cases.check("a", "i", "a", || Err(Error::NotSymplectic));
        let r = SuiteReport::new("s", Value::Null, cases.records);
        assert_eq!((r.skipped, r.failed, r.passed, r.run), (1, 1, 0, 2));
        assert_eq!(r.cases[0].id, "a");
        assert!(r.cases[0].witness["error"].is_string());
    }
}
