//! The numbered checks: case definitions, the case registry, and a parallel
//! runner that turns sampled residuals into [`ResidualReport`]s.
//!
//! Every manifest gets the structural cases (connection axioms, covariant
//! derivative lemmas, Lie derivative decompositions, curvature identities).
//! Corpus manifests additionally carry the statement-specific cases in the
//! registry, including negative controls.

mod build;
pub mod census;
pub mod context;
pub mod corpus;
mod generic;
mod props;
pub mod sampler;
mod sec6;

use std::cmp::Ordering;
use std::sync::Arc;

use rayon::prelude::*;

use crate::manifest::Manifest;
use crate::metric::GeomError;
use crate::report::{Expectation, ResidualReport, Verdict};
use crate::sampling::{SplitMix64, Tolerances};

pub use context::PointCtx;

/// Fewer admissible samples than this make a case inconclusive.
pub const MIN_SAMPLES: usize = 32;

/// Which tolerance a residual is judged against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TolClass {
    Alg,
    TwoKilling,
    Fd,
}

impl TolClass {
    pub fn of(self, t: &Tolerances) -> f64 {
        match self {
            TolClass::Alg => t.alg,
            TolClass::TwoKilling => t.two_killing,
            TolClass::Fd => t.fd,
        }
    }
}

/// One evaluated configuration: conclusion residual and the largest
/// hypothesis residual that was in force.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Sample {
    pub residual: f64,
    pub hypothesis: f64,
}

impl Sample {
    pub fn identity(residual: f64) -> Self {
        Self {
            residual,
            hypothesis: 0.0,
        }
    }
}

pub type Eval =
    Arc<dyn Fn(&PointCtx<'_>, &mut SplitMix64) -> Result<Vec<Sample>, GeomError> + Send + Sync>;

#[derive(Clone)]
pub struct Case {
    pub id: String,
    pub manifest: String,
    pub label: String,
    pub expect: Expectation,
    /// A negative control (a field or sampled `X` chosen to break the hypotheses).
    /// These are left out of `verify`, which reports on the statement itself.
    pub control: bool,
    pub tol: TolClass,
    pub hypothesis: String,
    pub eval: Eval,
}

impl std::fmt::Debug for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Case")
            .field("id", &self.id)
            .field("manifest", &self.manifest)
            .field("label", &self.label)
            .field("expect", &self.expect)
            .finish()
    }
}

impl Case {
    pub fn new(
        id: &str,
        m: &Manifest,
        label: impl Into<String>,
        tol: TolClass,
        eval: Eval,
    ) -> Self {
        Self {
            id: id.to_string(),
            manifest: m.name.clone(),
            label: label.into(),
            expect: Expectation::Holds,
            control: false,
            tol,
            hypothesis: String::new(),
            eval,
        }
    }

    pub fn expect(mut self, e: Expectation) -> Self {
        self.expect = e;
        self
    }

    /// A negative control: hypotheses or side conditions deliberately
    /// broken, so the conclusion is expected to fail. `verify` skips these.
    pub fn control(mut self) -> Self {
        self.control = true;
        self.expect = Expectation::Violated;
        self
    }

    pub fn hyp(mut self, h: impl Into<String>) -> Self {
        self.hypothesis = h.into();
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub samples: usize,
    pub seed: u64,
    pub tol: Tolerances,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            samples: 64,
            seed: 24181,
            tol: Tolerances::default(),
        }
    }
}

/// Structural cases that apply to any manifest.
pub fn structural_cases(m: &Manifest) -> Vec<Case> {
    generic::cases(m)
}

/// Statement-specific cases registered for a corpus manifest (by name).
pub fn registry_cases(m: &Manifest) -> Vec<Case> {
    let mut out = props::cases(m);
    out.extend(sec6::cases(m));
    out
}

pub fn all_cases(m: &Manifest) -> Vec<Case> {
    let mut out = structural_cases(m);
    out.extend(registry_cases(m));
    out
}

/// Keeps cases whose id equals a selector or extends it by `.item`.
pub fn select(cases: Vec<Case>, props: &[String]) -> Vec<Case> {
    if props.iter().any(|p| p == "all") {
        return cases;
    }
    cases
        .into_iter()
        .filter(|c| {
            props.iter().any(|p| {
                c.id == *p
                    || c.id
                        .strip_prefix(p.as_str())
                        .is_some_and(|r| r.starts_with('.'))
            })
        })
        .collect()
}

/// Runs `cases` (all on manifest `m`) over one shared set of sample points.
pub fn run(m: &Manifest, cases: &[Case], cfg: &SuiteConfig) -> Vec<ResidualReport> {
    let mut rng = SplitMix64::fork(cfg.seed, &format!("points/{}", m.name));
    let points = m.sample_points(&mut rng, cfg.samples);
    let ctxs: Vec<Result<PointCtx<'_>, GeomError>> = points
        .into_par_iter()
        .map(|p| PointCtx::new(m, p))
        .collect();
    let mut out: Vec<ResidualReport> = cases.par_iter().map(|c| evaluate(c, &ctxs, cfg)).collect();
    sort_reports(&mut out);
    out
}

/// Runs every case of every manifest.
pub fn run_corpus(manifests: &[Manifest], cfg: &SuiteConfig) -> Vec<ResidualReport> {
    let mut out: Vec<ResidualReport> = manifests
        .par_iter()
        .flat_map(|m| run(m, &all_cases(m), cfg))
        .collect();
    sort_reports(&mut out);
    out
}

fn evaluate(
    case: &Case,
    ctxs: &[Result<PointCtx<'_>, GeomError>],
    cfg: &SuiteConfig,
) -> ResidualReport {
    let tol = case.tol.of(&cfg.tol);
    let mut rng = SplitMix64::fork(
        cfg.seed,
        &format!("{}/{}/{}", case.id, case.manifest, case.label),
    );
    let mut samples = Vec::new();
    let mut error = None;
    for ctx in ctxs {
        let r = match ctx {
            Ok(ctx) => (case.eval)(ctx, &mut rng),
            Err(e) => Err(e.clone()),
        };
        match r {
            Ok(s) => samples.extend(s),
            Err(e) => {
                error.get_or_insert(e.to_string());
            }
        }
    }
    let n = samples.len();
    let max_abs = samples.iter().fold(0.0f64, |m, s| m.max(s.residual));
    let mean_abs = samples.iter().map(|s| s.residual).sum::<f64>() / n.max(1) as f64;
    let hyp_max = samples.iter().fold(0.0f64, |m, s| m.max(s.hypothesis));
    let finite = samples
        .iter()
        .all(|s| s.residual.is_finite() && s.hypothesis.is_finite());

    let mut note = None;
    let verdict = if let Some(e) = error {
        note = Some(format!("geometry error: {e}"));
        Verdict::Inconclusive
    } else if !finite {
        note = Some("non-finite residual".into());
        Verdict::Inconclusive
    } else if n < MIN_SAMPLES {
        note = Some(format!("only {n} admissible samples"));
        Verdict::Inconclusive
    } else if case.expect != Expectation::Violated && hyp_max > tol {
        note = Some(format!(
            "hypothesis residual {hyp_max:.3e} exceeds tolerance"
        ));
        Verdict::Inconclusive
    } else if max_abs <= tol {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    if case.expect == Expectation::Violated
        && note.is_none()
        && !case.hypothesis.is_empty()
        && hyp_max <= tol
    {
        note = Some("hypotheses were not violated at the sampled configurations".into());
    }
    ResidualReport {
        check: case.id.clone(),
        manifest: case.manifest.clone(),
        case: case.label.clone(),
        expected: case.expect,
        hypothesis: case.hypothesis.clone(),
        hypothesis_max: Some(hyp_max),
        samples: n,
        max_abs,
        mean_abs,
        tolerance: tol,
        verdict,
        note,
    }
}

/// Orders by check id (numbers compared numerically), then manifest, then case.
pub fn sort_reports(r: &mut [ResidualReport]) {
    r.sort_by(|a, b| {
        natural_cmp(&a.check, &b.check)
            .then_with(|| a.manifest.cmp(&b.manifest))
            .then_with(|| a.case.cmp(&b.case))
    });
}

pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, String)> {
        let mut out: Vec<(bool, String)> = Vec::new();
        for c in s.chars() {
            let d = c.is_ascii_digit();
            match out.last_mut() {
                Some((ld, buf)) if *ld == d => buf.push(c),
                _ => out.push((d, c.to_string())),
            }
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(&cb) {
        let o = match (x.0, y.0) {
            (true, true) => {
                x.1.parse::<u64>()
                    .unwrap_or(0)
                    .cmp(&y.1.parse::<u64>().unwrap_or(0))
            }
            _ => x.1.cmp(&y.1),
        };
        if o != Ordering::Equal {
            return o;
        }
    }
    ca.len().cmp(&cb.len())
}

/// Relative mismatch `|a − b| / max(1, |a|, |b|)`.
pub(crate) fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

/// Relative mismatch of two vectors in the ∞-norm.
pub(crate) fn rel_vec(a: &[f64], b: &[f64]) -> f64 {
    let inf = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let d = a
        .iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    d / 1f64.max(inf(a)).max(inf(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order_of_ids() {
        let mut ids = vec![
            "Prop4.10.1",
            "Prop4.9.2",
            "Eq27",
            "Eq4",
            "Prop4.9.2r",
            "Lemma4.2.4a",
        ];
        ids.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(
            ids,
            vec![
                "Eq4",
                "Eq27",
                "Lemma4.2.4a",
                "Prop4.9.2",
                "Prop4.9.2r",
                "Prop4.10.1"
            ]
        );
    }

    #[test]
    fn relative_residuals() {
        assert_eq!(rel(1e-3, 0.0), 1e-3);
        assert!((rel(1000.0, 1001.0) - 1.0 / 1001.0).abs() < 1e-15);
        assert_eq!(rel_vec(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
    }
}
