//! Acceptance suite: one line per criterion, then a summary.
//!
//! Runs without the libtest harness so every line is printed. The process
//! fails when a criterion fails, unless that criterion is listed in
//! `KNOWN_GAPS` with the reason it cannot be met.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use warpfield_core::connection::TorsionLocation;
use warpfield_core::fieldexpr::Block;
use warpfield_core::jets::{fd_oracle, DEFAULT_FD_STEP};
use warpfield_core::metric::{divergence, GeomError};
use warpfield_core::suite::{self, census, corpus, SuiteConfig, MIN_SAMPLES};
use warpfield_core::{
    killing_residual, Expectation, Jet2, KillingKind, LocalGeometry, Manifest, Point,
    ResidualReport, SplitMix64, Verdict,
};

/// Criteria that fail for a documented reason.
const KNOWN_GAPS: &[(usize, &str)] = &[(
    5,
    "kasner_phi2 (phi = 2t) satisfies the Kasner condition yet is not 2-Killing; \
     the condition only follows from the general warping condition when phi' = 1",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

struct Ctx {
    manifests: Vec<Manifest>,
    cfg: SuiteConfig,
}

impl Ctx {
    fn get(&self, name: &str) -> &Manifest {
        self.manifests
            .iter()
            .find(|m| m.name == name)
            .expect("bundled manifest")
    }

    /// Reports for the cases whose id is selected by `props`, on every manifest.
    fn run(&self, props: &[&str]) -> Vec<ResidualReport> {
        let props: Vec<String> = props.iter().map(|s| s.to_string()).collect();
        self.manifests
            .iter()
            .flat_map(|m| suite::run(m, &suite::select(suite::all_cases(m), &props), &self.cfg))
            .collect()
    }

    /// Like `run`, on one manifest and without negative controls.
    fn run_on(&self, name: &str, props: &[&str]) -> Vec<ResidualReport> {
        let m = self.get(name);
        let props: Vec<String> = props.iter().map(|s| s.to_string()).collect();
        let cases = suite::all_cases(m)
            .into_iter()
            .filter(|c| !c.control)
            .collect();
        suite::run(m, &suite::select(cases, &props), &self.cfg)
    }
}

fn worst(rs: &[ResidualReport]) -> f64 {
    rs.iter().fold(0.0f64, |w, r| w.max(r.max_abs))
}

fn all_within(rs: &[ResidualReport], tol: f64) -> bool {
    !rs.is_empty() && rs.iter().all(|r| r.samples > 0 && r.max_abs <= tol)
}

fn c1(ctx: &Ctx) -> Outcome {
    let start = Instant::now();
    let rs = ctx.run(&["Lemma3.1", "Lemma3.2", "Lemma4.1", "Lemma4.2", "Lemma6.7"]);
    let elapsed = start.elapsed();
    let names: BTreeSet<&str> = rs.iter().map(|r| r.manifest.as_str()).collect();
    let used: Vec<&Manifest> = ctx
        .manifests
        .iter()
        .filter(|m| names.contains(m.name.as_str()))
        .collect();
    let ms: BTreeSet<usize> = used.iter().map(|m| m.structure.m()).collect();
    let lorentz = used.iter().any(|m| {
        let r = m.structure.block_range(Block::Base);
        m.structure.signature()[r].contains(&-1)
    });
    let riemann = used
        .iter()
        .any(|m| m.structure.signature().iter().all(|s| *s > 0));
    let locs: BTreeSet<&str> = used
        .iter()
        .map(|m| match m.torsion.location {
            TorsionLocation::Zero => "zero",
            TorsionLocation::Base => "base",
            TorsionLocation::Fiber(_) => "fiber",
        })
        .collect();
    let enough_points = rs.iter().all(|r| r.samples >= ctx.cfg.samples);
    let pass = all_within(&rs, 1e-8)
        && names.len() >= 6
        && [1, 2, 3].iter().all(|k| ms.contains(k))
        && lorentz
        && riemann
        && locs.len() == 3
        && enough_points
        && elapsed < Duration::from_secs(10);
    outcome(
        pass,
        format!(
            "{} reports on {} manifests, m in {ms:?}, P in {locs:?}, max {:.1e}, {:.2}s",
            rs.len(),
            names.len(),
            worst(&rs),
            elapsed.as_secs_f64()
        ),
    )
}

fn c2(ctx: &Ctx) -> Outcome {
    let rs = ctx.run(&["Eq2", "Eq3"]);
    let configs = rs.iter().map(|r| r.samples).min().unwrap_or(0);
    outcome(
        all_within(&rs, 1e-8) && configs >= 256,
        format!(
            "{} reports, >= {configs} configurations each, max {:.1e}",
            rs.len(),
            worst(&rs)
        ),
    )
}

fn c3(ctx: &Ctx) -> Outcome {
    let ids: Vec<String> = (10..=19).map(|k| format!("Eq{k}")).collect();
    let ids: Vec<&str> = ids.iter().map(String::as_str).collect();
    let lie = ctx.run(&ids);
    let eq25 = ctx.run(&["Eq25"]);
    let covered: BTreeSet<&str> = lie.iter().map(|r| r.check.as_str()).collect();
    outcome(
        all_within(&lie, 1e-7) && all_within(&eq25, 1e-6) && covered.len() == 10,
        format!(
            "Eq10-19: {} reports, max {:.1e}; Eq25: {} reports, max {:.1e}",
            lie.len(),
            worst(&lie),
            eq25.len(),
            worst(&eq25)
        ),
    )
}

fn c4(ctx: &Ctx) -> Outcome {
    let ex: Vec<ResidualReport> = ctx
        .run_on("interval", &["Def3.4", "Def3.6", "Example3.12"])
        .into_iter()
        .filter(|r| r.case == "zeta_a")
        .collect();
    let good = ctx.run_on("grw_exp", &["Prop3.20"]);
    let bad = ctx.run_on("grw_poly", &["Prop3.20"]);
    let bad_min = bad.iter().map(|r| r.max_abs).fold(f64::INFINITY, f64::min);
    let pass = ex.len() == 3
        && all_within(&ex, 1e-8)
        && good.iter().all(|r| r.verdict == Verdict::Pass)
        && !good.is_empty()
        && !bad.is_empty()
        && bad.iter().all(|r| r.verdict == Verdict::Fail)
        && bad_min >= 1e-2;
    outcome(
        pass,
        format!(
            "a d/dt max {:.1e}; grw_exp Prop3.20 max {:.1e}; grw_poly smallest residual {bad_min:.2e}",
            worst(&ex),
            worst(&good)
        ),
    )
}

fn c5(ctx: &Ctx) -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for name in ["twok_1_0", "twok_2_1", "twok_m1_3"] {
        let m = ctx.get(name);
        let pts = m.sample_points(&mut SplitMix64::fork(ctx.cfg.seed, name), ctx.cfg.samples);
        let r = killing_residual(m, "zeta", KillingKind::TwoKilling, &pts).unwrap();
        pass &= r.max_abs <= 1e-7 && r.samples >= MIN_SAMPLES;
        detail.push(format!("{name} {:.1e}", r.max_abs));
    }
    let m = ctx.get("interval");
    let pts: Vec<Point> = m
        .sample_points(
            &mut SplitMix64::fork(ctx.cfg.seed, "interval"),
            ctx.cfg.samples,
        )
        .into_iter()
        .filter(|p| p.coords()[0] >= 0.5)
        .collect();
    let sq = killing_residual(m, "zeta_sq", KillingKind::TwoKilling, &pts).unwrap();
    // Pointwise minimum: every sampled t must fail, not just the worst one.
    let sq_min = pts
        .iter()
        .map(|p| {
            killing_residual(
                m,
                "zeta_sq",
                KillingKind::TwoKilling,
                std::slice::from_ref(p),
            )
            .unwrap()
            .max_abs
        })
        .fold(f64::INFINITY, f64::min);
    pass &= sq_min >= 0.1 && sq.samples >= MIN_SAMPLES;
    detail.push(format!("t^2 d/dt smallest {sq_min:.2}"));

    let kasner = ctx.run(&["Prop6.17"]);
    for r in &kasner {
        // Satisfying the Kasner condition means every hypothesis residual is small.
        let satisfies = r.hypothesis_max.is_some_and(|h| h <= r.tolerance);
        let ok = if satisfies {
            r.verdict == Verdict::Pass
        } else {
            r.verdict == Verdict::Fail
        };
        pass &= ok;
        detail.push(format!(
            "{} {} {}{}",
            r.manifest,
            if satisfies { "satisfies" } else { "violates" },
            r.verdict.label(),
            if ok { "" } else { " (unexpected)" }
        ));
    }
    pass &= kasner.iter().any(|r| r.expected == Expectation::Violated);
    outcome(pass, detail.join(", "))
}

/// Largest `|div_i ζ_i|` over the fibers at `p`.
fn fiber_divergence(m: &Manifest, field: &str, p: &Point) -> Result<f64, GeomError> {
    let ps = &m.structure;
    let vf = m.field(field).unwrap();
    let mut out = 0.0f64;
    for i in 0..ps.m() {
        let b = Block::Fiber(i);
        let r = ps.block_range(b);
        let pb = p.slice(r);
        let geom = LocalGeometry::at(ps.block_metric(b).unwrap(), &pb)?;
        let z = vf.restrict(b).jets_on_block(b, &pb)?;
        out = out.max(divergence(&geom, &z).abs());
    }
    Ok(out)
}

fn c6(ctx: &Ctx) -> Outcome {
    let rs = ctx.run(&["Eq27"]);
    let mut qualifying = BTreeSet::new();
    for r in &rs {
        let m = ctx.get(&r.manifest);
        let field = r.case.trim_start_matches("field=");
        if m.structure.m() < 2 || m.field(field).is_none() {
            continue;
        }
        let pts = m.sample_points(&mut SplitMix64::new(7), 16);
        let warped = (0..m.structure.m()).any(|i| {
            pts.iter().any(|p| {
                let w = m.structure.warping_jet(i, p).unwrap();
                w.grad().iter().any(|d| d.abs() > 1e-6)
            })
        });
        let div = pts
            .iter()
            .any(|p| fiber_divergence(m, field, p).is_ok_and(|d| d > 1e-6));
        if warped && div && r.max_abs <= 1e-6 && r.samples > 0 {
            qualifying.insert(r.manifest.clone());
        }
    }
    outcome(
        all_within(&rs, 1e-6) && qualifying.len() >= 4,
        format!(
            "{} reports, max {:.1e}; qualifying manifests: {}",
            rs.len(),
            worst(&rs),
            qualifying.into_iter().collect::<Vec<_>>().join(" ")
        ),
    )
}

fn c7(ctx: &Ctx) -> Outcome {
    let sym = ctx.run(&["Riemann.sym"]);
    let sphere: Vec<_> = ctx.run_on("sphere", &["Sectional"]);
    let torus = ctx.run_on("torus", &["Cor6.5", "Thm6.14.2"]);
    let pass = all_within(&sym, 1e-8)
        && sym.len() == ctx.manifests.len()
        && all_within(&sphere, 1e-6)
        && torus.len() == 2
        && all_within(&torus, 1e-7);
    outcome(
        pass,
        format!(
            "symmetries+Bianchi max {:.1e} on {} manifests; |K - 1| on the sphere {:.1e}; torus max {:.1e}",
            worst(&sym),
            sym.len(),
            worst(&sphere),
            worst(&torus)
        ),
    )
}

fn c8(ctx: &Ctx) -> Outcome {
    let inf = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let (mut g_worst, mut h_worst, mut count) = (0.0f64, 0.0f64, 0usize);
    let mut compare = |jet: &Jet2, fd: &Jet2| {
        let n = jet.grad().len().min(fd.grad().len());
        let dg: Vec<f64> = (0..n).map(|k| jet.d(k) - fd.d(k)).collect();
        g_worst = g_worst.max(inf(&dg) / (1.0 + inf(jet.grad())));
        let hj = jet.hess_matrix();
        let hf = fd.hess_matrix();
        let mut dh = 0.0f64;
        let mut sh = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                dh = dh.max((hj[a][b] - hf[a][b]).abs());
                sh = sh.max(hj[a][b].abs());
            }
        }
        h_worst = h_worst.max(dh / (1.0 + sh));
        count += 1;
    };
    for m in &ctx.manifests {
        let ps = &m.structure;
        let n = ps.total_dim();
        let pts = m.sample_points(
            &mut SplitMix64::fork(ctx.cfg.seed, &m.name),
            ctx.cfg.samples,
        );
        for p in &pts {
            for (_, f) in &m.fields {
                let jets = f.jets(ps, p).unwrap();
                for (k, jet) in jets.iter().enumerate() {
                    let fd =
                        fd_oracle::<_, GeomError>(|q| Ok(f.values(ps, q)?[k]), p, DEFAULT_FD_STEP)
                            .unwrap();
                    compare(&jet.restrict(0..n), &fd);
                }
            }
            for i in 0..ps.m() {
                let jet = ps.warping_jet(i, p).unwrap();
                let fd = fd_oracle::<_, GeomError>(
                    |q| ps.warping_jet(i, q).map(|j| j.value()),
                    p,
                    DEFAULT_FD_STEP,
                )
                .unwrap();
                compare(&jet, &fd);
            }
        }
    }
    let eq4 = ctx.run(&["Eq4"]);
    let pass = g_worst <= 1e-6 && h_worst <= 1e-4 && all_within(&eq4, 1e-7);
    outcome(
        pass,
        format!(
            "{count} jets: grad {g_worst:.1e}, hess {h_worst:.1e} (relative); Eq4 max {:.1e}",
            worst(&eq4)
        ),
    )
}

fn c9(ctx: &Ctx) -> Outcome {
    let ids = census::registered_ids(&ctx.manifests);
    let missing = census::uncovered(&ids);
    let reports = suite::run_corpus(&ctx.manifests, &ctx.cfg);
    let thin: Vec<_> = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Pass && r.samples < MIN_SAMPLES)
        .collect();
    let inconclusive = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Inconclusive)
        .count();
    let least = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Pass)
        .map(|r| r.samples)
        .min()
        .unwrap_or(0);
    outcome(
        missing.is_empty() && thin.is_empty() && inconclusive == 0,
        format!(
            "{} results, {} uncovered; {} reports, fewest samples in a pass {least}, {inconclusive} inconclusive",
            census::TABLE.len(),
            missing.len(),
            reports.len()
        ),
    )
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_warpfield"))
        .args(args)
        .env_remove("WARPFIELD_CORPUS")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn c10(ctx: &Ctx) -> Outcome {
    let mut bad = Vec::new();
    for m in &ctx.manifests {
        let name = m.name.as_str();
        let (code, first) = cli(&["verify", name, "--format", "jsonl"]);
        let (again, second) = cli(&["verify", name, "--format", "jsonl"]);
        if code != again || first != second {
            bad.push(format!("{name} not deterministic"));
        }
        let expect_fail = suite::all_cases(m)
            .iter()
            .any(|c| !c.control && c.expect != Expectation::Holds);
        if code != i32::from(expect_fail) {
            bad.push(format!("{name} exit {code}"));
        }
    }
    let fixed = [
        (
            vec!["verify", "corpus/grw_exp.wm", "--props", "Prop3.20"],
            0,
        ),
        (
            vec!["killing", "corpus/interval.wm", "--field", "zeta_a"],
            0,
        ),
        (
            vec!["verify", "corpus/grw_poly.wm", "--props", "Prop3.20"],
            1,
        ),
        (vec!["verify", "no_such_manifest.wm"], 2),
        (vec!["verify", "grw_exp", "--samples", "nope"], 2),
        (vec!["killing", "interval", "--field", "no_such_field"], 2),
        (vec!["suite"], 0),
    ];
    for (args, want) in &fixed {
        let (code, _) = cli(args);
        if code != *want {
            bad.push(format!("`{}` exit {code}, want {want}", args.join(" ")));
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!(
                "{} manifests run twice with identical output, {} fixed invocations",
                ctx.manifests.len(),
                fixed.len()
            )
        } else {
            bad.join("; ")
        },
    )
}

fn main() {
    let ctx = Ctx {
        manifests: corpus::load_all().expect("bundled corpus parses"),
        cfg: SuiteConfig::default(),
    };
    type Criterion = (&'static str, fn(&Ctx) -> Outcome);
    let criteria: [Criterion; 10] = [
        ("connection decomposition lemmas", c1),
        ("semi-symmetric axioms", c2),
        ("Lie derivative decompositions", c3),
        ("interval example and GRW proposition", c4),
        ("2-Killing witnesses and Kasner condition", c5),
        ("trace identity", c6),
        ("curvature sanity", c7),
        ("oracle equivalence", c8),
        ("registry census", c9),
        ("determinism and exit codes", c10),
    ];
    let mut unexpected = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let n = i + 1;
        let o = f(&ctx);
        let known = KNOWN_GAPS.iter().find(|(k, _)| *k == n);
        let tag = match (o.pass, known) {
            (true, _) => "PASS",
            (false, Some(_)) => "FAIL (known)",
            (false, None) => "FAIL",
        };
        println!("criterion {n:>2} {tag:<12} {title}: {}", o.detail);
        if let (false, Some((_, why))) = (o.pass, known) {
            println!("              known gap: {why}");
        }
        if !o.pass && known.is_none() {
            unexpected += 1;
        }
        if o.pass && known.is_some() {
            println!("              listed as a known gap but passed; update KNOWN_GAPS");
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("acceptance: {unexpected} unexpected result(s)");
        std::process::exit(1);
    }
    println!("acceptance: done");
}
