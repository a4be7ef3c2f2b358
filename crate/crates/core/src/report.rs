//! Residual reports and their text and JSONL renderings.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// What a registry case is expected to show.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    /// Hypotheses hold and the conclusion should pass.
    Holds,
    /// A hypothesis is deliberately broken; the conclusion should fail.
    Violated,
    /// The statement's hypotheses hold as written but its conclusion fails.
    Counterexample,
}

impl Expectation {
    pub fn met_by(self, v: Verdict) -> bool {
        match self {
            Expectation::Holds => v == Verdict::Pass,
            Expectation::Violated | Expectation::Counterexample => v == Verdict::Fail,
        }
    }
}

/// Outcome of one check on one manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub check: String,
    pub manifest: String,
    pub case: String,
    pub expected: Expectation,
    /// Hypotheses and sampling restrictions in force.
    pub hypothesis: String,
    /// Largest hypothesis residual over the samples, when hypotheses are checked.
    pub hypothesis_max: Option<f64>,
    /// Number of admissible configurations evaluated.
    pub samples: usize,
    pub max_abs: f64,
    pub mean_abs: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub note: Option<String>,
}

impl ResidualReport {
    pub fn as_expected(&self) -> bool {
        self.expected.met_by(self.verdict)
    }
}

/// How the overall result is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Judge {
    /// Every check must pass.
    Verdicts,
    /// Every case must match its expectation (negative controls must fail).
    Expectations,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub tool_version: String,
    pub manifest: String,
    pub seed: u64,
    pub samples: usize,
    pub judge: Judge,
    pub checks: Vec<ResidualReport>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| match self.judge {
                Judge::Verdicts => c.verdict != Verdict::Pass,
                Judge::Expectations => !c.as_expected(),
            })
            .count()
    }

    pub fn overall(&self) -> bool {
        !self.checks.is_empty() && self.failures() == 0
    }

    /// One JSON object per line with keys in alphabetical order.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let header = json!({
            "kind": "header",
            "judge": self.judge,
            "manifest": self.manifest,
            "samples": self.samples,
            "seed": self.seed,
            "tool_version": self.tool_version,
        });
        push_line(&mut out, header);
        for c in &self.checks {
            let mut v = serde_json::to_value(c).expect("report serializes");
            if let Value::Object(map) = &mut v {
                map.insert("kind".into(), Value::from("check"));
                map.insert("as_expected".into(), Value::from(c.as_expected()));
            }
            push_line(&mut out, v);
        }
        let footer = json!({
            "kind": "overall",
            "checks": self.checks.len(),
            "failed": self.failures(),
            "pass": self.overall(),
        });
        push_line(&mut out, footer);
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "warpfield {}  manifest={}  seed={}  samples={}",
            self.tool_version, self.manifest, self.seed, self.samples
        );
        let id_w = self.checks.iter().map(|c| c.check.len()).max().unwrap_or(5);
        let m_w = self
            .checks
            .iter()
            .map(|c| c.manifest.len())
            .max()
            .unwrap_or(8);
        for c in &self.checks {
            let mark = match self.judge {
                Judge::Verdicts => "",
                Judge::Expectations if c.as_expected() => "",
                Judge::Expectations => "  <-- unexpected",
            };
            let _ = writeln!(
                out,
                "{:<12} {:<id_w$}  {:<m_w$}  max={:<10.3e} tol={:<8.1e} n={:<5} {:<14} {}{}",
                c.verdict.label(),
                c.check,
                c.manifest,
                c.max_abs,
                c.tolerance,
                c.samples,
                format!("[{}]", expect_label(c.expected)),
                c.case,
                mark,
            );
        }
        let _ = writeln!(
            out,
            "overall: {} ({} checks, {} failed)",
            if self.overall() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.failures()
        );
        out
    }
}

fn expect_label(e: Expectation) -> &'static str {
    match e {
        Expectation::Holds => "holds",
        Expectation::Violated => "violated",
        Expectation::Counterexample => "counterexample",
    }
}

fn push_line(out: &mut String, v: Value) {
    // serde_json's default map is ordered, so keys come out sorted.
    out.push_str(&v.to_string());
    out.push('\n');
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(verdict: Verdict, expected: Expectation) -> ResidualReport {
        ResidualReport {
            check: "Prop3.20".into(),
            manifest: "grw_exp".into(),
            case: "f = e^t".into(),
            expected,
            hypothesis: "g2(X2, zeta2) = 0".into(),
            hypothesis_max: Some(0.0),
            samples: 64,
            max_abs: 1.5e-15,
            mean_abs: 2.0e-16,
            tolerance: 1e-8,
            verdict,
            note: None,
        }
    }

    fn report(judge: Judge, checks: Vec<ResidualReport>) -> Report {
        Report {
            tool_version: "0.1.0".into(),
            manifest: "grw_exp".into(),
            seed: 24181,
            samples: 64,
            judge,
            checks,
        }
    }

    #[test]
    fn jsonl_keys_are_sorted() {
        let r = report(
            Judge::Verdicts,
            vec![sample(Verdict::Pass, Expectation::Holds)],
        );
        let text = r.to_jsonl();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("{\"judge\":\"verdicts\",\"kind\":\"header\""));
        let keys: Vec<String> = match serde_json::from_str::<Value>(lines[1]).unwrap() {
            Value::Object(m) => m.keys().cloned().collect(),
            _ => panic!(),
        };
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(lines[1].contains("\"verdict\":\"pass\""));
        assert_eq!(
            lines[2],
            "{\"checks\":1,\"failed\":0,\"kind\":\"overall\",\"pass\":true}"
        );
    }

    #[test]
    fn judges_differ_on_negative_controls() {
        let checks = vec![
            sample(Verdict::Pass, Expectation::Holds),
            sample(Verdict::Fail, Expectation::Violated),
        ];
        assert!(!report(Judge::Verdicts, checks.clone()).overall());
        assert!(report(Judge::Expectations, checks).overall());
        assert!(!report(Judge::Verdicts, vec![]).overall());
    }

    #[test]
    fn text_has_one_line_per_check() {
        let r = report(
            Judge::Expectations,
            vec![sample(Verdict::Inconclusive, Expectation::Holds)],
        );
        let t = r.to_text();
        assert_eq!(t.lines().count(), 3);
        assert!(t.contains("INCONCLUSIVE"));
        assert!(t.contains("unexpected"));
    }
}
