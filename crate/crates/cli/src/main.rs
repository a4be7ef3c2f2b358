//! `warpfield`: check Killing-type identities on warped-product manifests.
//!
//! Exit codes: 0 when every selected check passes, 1 when a check fails,
//! 2 on usage or manifest errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;
use warpfield_core::suite::{self, census, corpus, SuiteConfig};
use warpfield_core::{
    killing_residual, Expectation, Judge, KillingKind, Manifest, ManifestError, Report,
    ResidualReport, SplitMix64, Tolerances, Verdict, TOOL_VERSION,
};

#[derive(Parser)]
#[command(name = "warpfield", version)]
#[command(about = "Numerical checks for Killing-type vector fields on multiply warped products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the registered checks for one manifest (negative controls excluded)
    Verify {
        /// Manifest path, or the name of a bundled manifest
        manifest: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Evaluate a Killing-type residual for one field of a manifest
    Killing {
        manifest: String,
        /// Field name as declared in the manifest
        #[arg(long)]
        field: String,
        /// killing | ssm-killing | two-killing | homothetic | parallel
        #[arg(long, default_value = "killing")]
        kind: KillingKind,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run every case on the bundled corpus; passes when every case, negative
    /// controls included, behaves as expected
    Suite {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print which checks cover each numbered result
    Census,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Sample points per manifest
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long, default_value_t = 24181)]
    seed: u64,
    /// Tolerance for algebraic identities and Killing residuals
    #[arg(long, default_value_t = 1e-8)]
    tol_alg: f64,
    /// Tolerance for 2-Killing residuals and Lie decompositions
    #[arg(long = "tol-2k", default_value_t = 1e-7)]
    tol_2k: f64,
    /// Tolerance for finite-difference and trace comparisons
    #[arg(long, default_value_t = 1e-6)]
    tol_fd: f64,
    /// Comma-separated check ids, or `all`
    #[arg(long, value_delimiter = ',', default_value = "all")]
    props: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Jsonl,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error("{0}")]
    Usage(String),
}

impl RunArgs {
    fn config(&self) -> Result<SuiteConfig, CliError> {
        if self.samples == 0 {
            return Err(CliError::Usage("--samples must be positive".into()));
        }
        let tols = [self.tol_alg, self.tol_2k, self.tol_fd];
        if tols.iter().any(|t| !t.is_finite() || *t <= 0.0) {
            return Err(CliError::Usage("tolerances must be positive".into()));
        }
        Ok(SuiteConfig {
            samples: self.samples,
            seed: self.seed,
            tol: Tolerances {
                alg: self.tol_alg,
                two_killing: self.tol_2k,
                fd: self.tol_fd,
            },
        })
    }

    fn props(&self) -> Vec<String> {
        self.props.iter().map(|p| p.trim().to_string()).collect()
    }
}

fn corpus_dir() -> Option<PathBuf> {
    std::env::var_os("WARPFIELD_CORPUS").map(PathBuf::from)
}

/// Resolves a manifest argument: an existing file, then the same file name
/// under `WARPFIELD_CORPUS`, then a bundled manifest with that stem.
fn load(arg: &str) -> Result<Manifest, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        return Ok(Manifest::from_path(path)?);
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg);
    if let Some(dir) = corpus_dir() {
        let file = path
            .file_name()
            .map(PathBuf::from)
            .unwrap_or_else(|| format!("{stem}.wm").into());
        let candidate = dir.join(file);
        if candidate.is_file() {
            return Ok(Manifest::from_path(&candidate)?);
        }
    }
    match corpus::source(stem) {
        Some(src) => Ok(Manifest::parse(stem, src)?),
        None => Err(CliError::Manifest(ManifestError::File(format!(
            "{arg}: no such manifest"
        )))),
    }
}

/// The corpus from `WARPFIELD_CORPUS` if set, else the bundled one.
fn load_corpus() -> Result<Vec<Manifest>, CliError> {
    let Some(dir) = corpus_dir() else {
        return Ok(corpus::load_all()?);
    };
    let entries = std::fs::read_dir(&dir)
        .map_err(|e| ManifestError::File(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "wm"))
        .collect();
    paths.sort();
    Ok(paths
        .iter()
        .map(|p| Manifest::from_path(p))
        .collect::<Result<_, _>>()?)
}

fn select(cases: Vec<suite::Case>, props: &[String]) -> Result<Vec<suite::Case>, CliError> {
    let picked = suite::select(cases, props);
    if picked.is_empty() {
        return Err(CliError::Usage(format!(
            "no checks match --props {}",
            props.join(",")
        )));
    }
    Ok(picked)
}

fn verify(arg: &str, run: &RunArgs) -> Result<Report, CliError> {
    let cfg = run.config()?;
    let m = load(arg)?;
    let cases: Vec<_> = suite::all_cases(&m)
        .into_iter()
        .filter(|c| !c.control)
        .collect();
    let cases = select(cases, &run.props())?;
    Ok(Report {
        tool_version: TOOL_VERSION.into(),
        manifest: m.name.clone(),
        seed: cfg.seed,
        samples: cfg.samples,
        judge: Judge::Verdicts,
        checks: suite::run(&m, &cases, &cfg),
    })
}

fn killing(arg: &str, field: &str, kind: KillingKind, run: &RunArgs) -> Result<Report, CliError> {
    let cfg = run.config()?;
    let m = load(arg)?;
    if m.field(field).is_none() {
        return Err(CliError::Usage(format!(
            "manifest `{}` has no field `{field}` (fields: {})",
            m.name,
            m.field_names().join(", ")
        )));
    }
    let mut rng = SplitMix64::fork(cfg.seed, &format!("points/{}", m.name));
    let points = m.sample_points(&mut rng, cfg.samples);
    let tolerance = match kind {
        KillingKind::TwoKilling => cfg.tol.two_killing,
        _ => cfg.tol.alg,
    };
    let check = match killing_residual(&m, field, kind, &points) {
        Ok(r) => ResidualReport {
            check: kind.name().into(),
            manifest: m.name.clone(),
            case: match r.c {
                Some(c) => format!("{field}, c = {c:.6}"),
                None => field.into(),
            },
            expected: Expectation::Holds,
            hypothesis: String::new(),
            hypothesis_max: None,
            samples: r.samples,
            max_abs: r.max_abs,
            mean_abs: r.mean_abs,
            tolerance,
            verdict: if r.max_abs <= tolerance {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            note: None,
        },
        Err(e) => ResidualReport {
            check: kind.name().into(),
            manifest: m.name.clone(),
            case: field.into(),
            expected: Expectation::Holds,
            hypothesis: String::new(),
            hypothesis_max: None,
            samples: 0,
            max_abs: f64::NAN,
            mean_abs: f64::NAN,
            tolerance,
            verdict: Verdict::Inconclusive,
            note: Some(e.to_string()),
        },
    };
    Ok(Report {
        tool_version: TOOL_VERSION.into(),
        manifest: m.name,
        seed: cfg.seed,
        samples: cfg.samples,
        judge: Judge::Verdicts,
        checks: vec![check],
    })
}

fn run_suite(run: &RunArgs) -> Result<Report, CliError> {
    let cfg = run.config()?;
    let manifests = load_corpus()?;
    let props = run.props();
    let mut checks = Vec::new();
    for m in &manifests {
        let cases = suite::select(suite::all_cases(m), &props);
        checks.extend(suite::run(m, &cases, &cfg));
    }
    if checks.is_empty() {
        return Err(CliError::Usage(format!(
            "no checks match --props {}",
            props.join(",")
        )));
    }
    suite::sort_reports(&mut checks);
    Ok(Report {
        tool_version: TOOL_VERSION.into(),
        manifest: "corpus".into(),
        seed: cfg.seed,
        samples: cfg.samples,
        judge: Judge::Expectations,
        checks,
    })
}

fn emit(report: &Report, format: Format) -> ExitCode {
    let out = match format {
        Format::Text => report.to_text(),
        Format::Jsonl => report.to_jsonl(),
    };
    print!("{out}");
    if report.overall() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify { manifest, run } => verify(manifest, run).map(|r| (r, run.format)),
        Command::Killing {
            manifest,
            field,
            kind,
            run,
        } => killing(manifest, field, *kind, run).map(|r| (r, run.format)),
        Command::Suite { run } => run_suite(run).map(|r| (r, run.format)),
        Command::Census => {
            return match load_corpus() {
                Ok(ms) => {
                    let ids = census::registered_ids(&ms);
                    print!("{}", census::render(&ids));
                    if census::uncovered(&ids).is_empty() {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            };
        }
    };
    match result {
        Ok((report, format)) => emit(&report, format),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
