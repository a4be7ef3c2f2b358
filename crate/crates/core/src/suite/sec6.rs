//! Registry cases for 2-Killing fields, the curvature consequences and the
//! parallelism theorems, keyed by corpus manifest name.

use std::sync::Arc;

use crate::curvature::{parallel_residual_at, sectional, CurvatureAt};
use crate::fieldexpr::{Block, FieldExpr};
use crate::jets::Jet2;
use crate::lie::{
    self, apply, lie_lie_metric_matrix, nabla_x_nabla_zeta_zeta, nabla_zeta, nabla_zeta_zeta,
};
use crate::manifest::Manifest;
use crate::metric::GeomError;
use crate::report::Expectation;
use crate::sampling::SplitMix64;
use crate::spacetime::SpacetimeKind;

use super::build::*;
use super::context::{values, PointCtx};
use super::generic::lhs_trace;
use super::sampler::rand_vec;
use super::{rel, Case, Eval, Sample, TolClass};

const B: Block = Block::Base;

pub(super) fn cases(m: &Manifest) -> Vec<Case> {
    let mut out = Vec::new();
    let name = m.name.as_str();
    match name {
        "interval" => {
            out.push(def61(m, "zeta_cbrt"));
            out.push(def61(m, "zeta_sq").control());
            out.push(eq22(m, "zeta_sq").control());
        }
        "twok_1_0" | "twok_2_1" | "twok_m1_3" => {
            out.push(def61(m, "zeta"));
            out.push(eq22(m, "zeta"));
        }
        "torus" => torus(m, &mut out),
        "torus_warped" => {
            out.push(lemma66(m, "zeta_y"));
            out.push(thm613(m, "Thm6.13.2", "zeta_y", &[B]));
            out.push(thm613(m, "Thm6.13.4", "zeta_z", &[fib(0)]).control());
            out.push(thm613(m, "Thm6.13.1", "zeta_z", &[B, fib(0)]).control());
        }
        "plane_rot" => out.push(lemma66(m, "zeta").control()),
        "s3_hopf" => {
            out.push(lemma64(m, "zeta"));
            out.push(lemma64(m, "zeta_1").control());
            out.push(cor65(m, "zeta"));
            out.push(thm614(m, "Thm6.14.1", "zeta"));
            out.push(thm614(m, "Thm6.14.2", "zeta"));
            out.push(eq22(m, "zeta"));
            out.push(sectional_case(m, 1.0));
        }
        "sphere" => {
            out.push(lemma64(m, "zeta").control());
            out.push(cor65(m, "zeta").control());
            out.push(sectional_case(m, 1.0));
        }
        "hyperbolic" => {
            out.push(lemma64(m, "zeta").control());
            out.push(cor65(m, "zeta").control());
            out.push(thm614(m, "Thm6.14.1", "zeta").control());
            out.push(thm614(m, "Thm6.14.2", "zeta").control());
            out.push(sectional_case(m, -1.0));
        }
        "mw_twok" => mw_twok(m, &mut out),
        "prop615" | "prop615_bad" | "prop615_dil" => {
            let expect = if name == "prop615" {
                Expectation::Holds
            } else {
                Expectation::Violated
            };
            out.push(eq26(m).expect(expect));
            out.push(prop615(m).expect(expect));
            if name == "prop615" {
                out.push(cor69_1(m, "zeta"));
                out.push(eq22(m, "zeta"));
            }
        }
        "kasner" | "kasner_a2" | "kasner_perturbed" | "kasner_phi2" => {
            let expect = match name {
                "kasner_perturbed" => Expectation::Violated,
                "kasner_phi2" => Expectation::Counterexample,
                _ => Expectation::Holds,
            };
            out.push(prop617(m).expect(expect));
            if name == "kasner" {
                out.push(cor69_1(m, "zeta"));
                out.push(eq22(m, "zeta"));
            }
        }
        _ => {}
    }
    out
}

/// One sample per point.
fn point_eval<F>(f: F) -> Eval
where
    F: Fn(&PointCtx<'_>) -> Result<Sample, GeomError> + Send + Sync + 'static,
{
    Arc::new(move |ctx, _rng| Ok(vec![f(ctx)?]))
}

/// `k` samples per point over random vectors `X`; `None` skips a draw.
fn vector_eval<F>(k: usize, f: F) -> Eval
where
    F: Fn(&PointCtx<'_>, &[f64]) -> Result<Option<Sample>, GeomError> + Send + Sync + 'static,
{
    Arc::new(move |ctx, rng: &mut SplitMix64| {
        let mut out = Vec::with_capacity(k);
        for _ in 0..k {
            let x = rand_vec(ctx, rng, &[]);
            if let Some(s) = f(ctx, &x)? {
                out.push(s);
            }
        }
        Ok(out)
    })
}

fn ll_max(ctx: &PointCtx<'_>, z: &[Jet2]) -> f64 {
    lie::max_abs(&lie_lie_metric_matrix(&ctx.geom, z))
}

fn killing_max(ctx: &PointCtx<'_>, z: &[Jet2]) -> f64 {
    lie::max_abs(&lie::lie_metric_matrix(&ctx.geom, z))
}

/// Largest component of `d g(ζ, ζ)`, via `X g(ζ, ζ) = 2 g(∇_X ζ, ζ)`.
fn length_variation(ctx: &PointCtx<'_>, z: &[Jet2]) -> f64 {
    let a = nabla_zeta(&ctx.geom, z);
    let zv = values(z);
    (0..ctx.n())
        .map(|k| {
            let mut e = vec![0.0; ctx.n()];
            e[k] = 1.0;
            2.0 * ctx.inner(&apply(&a, &e), &zv)
        })
        .fold(0.0f64, |m, v| m.max(v.abs()))
}

fn def61(m: &Manifest, field: &str) -> Case {
    Case::new(
        "Def6.1",
        m,
        field,
        TolClass::TwoKilling,
        two_killing_matrix(&Z::of(field)),
    )
}

/// `R(ζ, X, X, ζ) = g(∇_X ζ, ∇_X ζ) + g(∇_X ∇_ζ ζ, X)` for a 2-Killing `ζ`.
fn eq22(m: &Manifest, field: &str) -> Case {
    let z = Z::of(field);
    let eval = vector_eval(4, move |ctx, x| {
        let zj = z.at(ctx)?;
        let zv = values(&zj);
        let nx = apply(&nabla_zeta(&ctx.geom, &zj), x);
        let lhs = ctx.curvature().r4(&zv, x, x, &zv);
        let rhs = ctx.inner(&nx, &nx) + ctx.inner(&nabla_x_nabla_zeta_zeta(&ctx.geom, &zj, x), x);
        Ok(Some(Sample {
            residual: rel(lhs, rhs),
            hypothesis: ll_max(ctx, &zj),
        }))
    });
    Case::new("Eq22", m, field, TolClass::TwoKilling, eval).hyp("zeta 2-Killing")
}

/// Killing with constant length gives `∇_ζ ζ = 0`.
fn lemma64(m: &Manifest, field: &str) -> Case {
    let z = Z::of(field);
    let eval = point_eval(move |ctx| {
        let zj = z.at(ctx)?;
        let r = nabla_zeta_zeta(&ctx.geom, &zj)
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(Sample {
            residual: r,
            hypothesis: killing_max(ctx, &zj).max(length_variation(ctx, &zj)),
        })
    });
    Case::new("Lemma6.4", m, field, TolClass::Alg, eval).hyp("zeta Killing of constant length")
}

/// `R(ζ, X, X, ζ) = g(∇_X ζ, ∇_X ζ) ≥ 0`.
fn cor65(m: &Manifest, field: &str) -> Case {
    let z = Z::of(field);
    let eval = vector_eval(4, move |ctx, x| {
        let zj = z.at(ctx)?;
        let zv = values(&zj);
        let nx = apply(&nabla_zeta(&ctx.geom, &zj), x);
        let r = ctx.curvature().r4(&zv, x, x, &zv);
        let hyp = killing_max(ctx, &zj)
            .max(length_variation(ctx, &zj))
            .max(ll_max(ctx, &zj));
        Ok(Some(Sample {
            residual: rel(r, ctx.inner(&nx, &nx)).max((-r).max(0.0)),
            hypothesis: hyp,
        }))
    });
    Case::new("Cor6.5", m, field, TolClass::TwoKilling, eval)
        .hyp("zeta Killing, 2-Killing, of constant length")
}

/// Largest `Ric^b(ζ_b, ζ_b)` positive part on a factor.
fn factor_ricci_pos(ctx: &PointCtx<'_>, z: &[Jet2], b: Block) -> f64 {
    let g = &ctx.bc(b).geom;
    let zl = values(&ctx.local_jets(z, b));
    CurvatureAt::from_geometry(g).ricci_form(&zl, &zl).max(0.0)
}

/// Parallel residual together with `Tr g(∇ζ, ∇ζ)`.
fn parallel_and_trace(ctx: &PointCtx<'_>, z: &[Jet2]) -> Result<f64, GeomError> {
    Ok(parallel_residual_at(&ctx.geom, z).max(lhs_trace(ctx, z)?.abs()))
}

/// 2-Killing with `Ric(ζ, ζ) ≤ 0` on a compact manifold is parallel.
fn lemma66(m: &Manifest, field: &str) -> Case {
    let z = Z::of(field);
    let eval = point_eval(move |ctx| {
        let zj = z.at(ctx)?;
        let zv = values(&zj);
        let ric = ctx.curvature().ricci_form(&zv, &zv).max(0.0);
        Ok(Sample {
            residual: parallel_and_trace(ctx, &zj)?,
            hypothesis: ll_max(ctx, &zj).max(ric),
        })
    });
    Case::new("Lemma6.6", m, field, TolClass::TwoKilling, eval)
        .hyp("zeta 2-Killing, Ric(zeta, zeta) <= 0, compactness modeled by periodic charts (not verified)")
}

/// The parallelism theorem for the parts of `ζ` on `blocks`.
fn thm613(m: &Manifest, id: &str, field: &str, blocks: &[Block]) -> Case {
    let z = Z::of(field);
    let blocks = blocks.to_vec();
    let eval = point_eval(move |ctx| {
        let zj = z.at(ctx)?;
        let mut hyp = 0.0f64;
        for &b in &blocks {
            hyp = hyp
                .max(ctx.factor_two_killing(&zj, b))
                .max(factor_ricci_pos(ctx, &zj, b));
            if let Block::Fiber(i) = b {
                // f_i constant.
                hyp = hyp.max(ctx.grad_f_norm2(i).abs().sqrt());
            }
        }
        if blocks == [B] {
            for i in 0..ctx.m() {
                hyp = hyp.max(zb_f(ctx, &zj, i).abs());
            }
        }
        Ok(Sample {
            residual: parallel_and_trace(ctx, &zj)?,
            hypothesis: hyp,
        })
    });
    Case::new(id, m, field, TolClass::TwoKilling, eval)
        .hyp("parts 2-Killing with Ric <= 0 on compact factors, warpings as required")
}

/// `K(ζ, X) ≥ 0`; planes too close to degenerate are skipped.
fn thm614(m: &Manifest, id: &str, field: &str) -> Case {
    let z = Z::of(field);
    let along_curve = id == "Thm6.14.1";
    let eval = vector_eval(4, move |ctx, x| {
        let zj = z.at(ctx)?;
        let zv = values(&zj);
        let k = match sectional(&ctx.geom, ctx.curvature(), &zv, x) {
            Ok(k) => k,
            Err(GeomError::DegeneratePlane { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let hyp = if along_curve {
            ll_max(ctx, &zj).max(
                nabla_x_nabla_zeta_zeta(&ctx.geom, &zj, x)
                    .iter()
                    .fold(0.0f64, |m, v| m.max(v.abs())),
            )
        } else {
            killing_max(ctx, &zj).max(length_variation(ctx, &zj))
        };
        Ok(Some(Sample {
            residual: (-k).max(0.0),
            hypothesis: hyp,
        }))
    });
    let h = if along_curve {
        "zeta 2-Killing, nabla_zeta zeta parallel along X"
    } else {
        "zeta Killing of constant length"
    };
    Case::new(id, m, field, TolClass::TwoKilling, eval).hyp(h)
}

fn sectional_case(m: &Manifest, k: f64) -> Case {
    let eval = Arc::new(move |ctx: &PointCtx<'_>, rng: &mut SplitMix64| {
        let mut out = Vec::new();
        for _ in 0..4 {
            let (x, y) = (rand_vec(ctx, rng, &[]), rand_vec(ctx, rng, &[]));
            match sectional(&ctx.geom, ctx.curvature(), &x, &y) {
                Ok(v) => out.push(Sample::identity((v - k).abs())),
                Err(GeomError::DegeneratePlane { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    });
    Case::new("Sectional", m, format!("K = {k}"), TolClass::Fd, eval)
        .hyp("constant curvature model")
}

fn torus(m: &Manifest, out: &mut Vec<Case>) {
    let all = [B, fib(0), fib(1)];
    out.push(lemma64(m, "zeta"));
    out.push(cor65(m, "zeta"));
    out.push(lemma66(m, "zeta"));
    out.push(thm613(m, "Thm6.13.1", "zeta", &all));
    out.push(thm613(m, "Thm6.13.2", "zeta_B", &[B]));
    out.push(thm613(m, "Thm6.13.3", "zeta_B1", &[B, fib(0)]));
    out.push(thm613(m, "Thm6.13.4", "zeta_1", &[fib(0)]));
    out.push(thm613(m, "Thm6.13.5", "zeta_fibers", &[fib(0), fib(1)]));
    out.push(thm614(m, "Thm6.14.1", "zeta"));
    out.push(thm614(m, "Thm6.14.2", "zeta"));
    out.push(eq22(m, "zeta"));
    out.push(cor611_1(m, "zeta"));
}

fn mw_twok(m: &Manifest, out: &mut Vec<Case>) {
    out.push(cor69_1(m, "zeta"));
    out.push(cor69_1(m, "zeta_bad").control());
    out.push(cor69_2(m, "zeta"));
    out.push(cor69_2(m, "zeta_fibdil").control());
    out.push(cor610_1(m, "zeta"));
    out.push(cor610_1(m, "zeta_vfib").control());
    out.push(cor611_1(m, "zeta"));
    out.push(cor611_1(m, "zeta_vfib").control());
    out.push(cor611_2(m, "zeta_fib"));
    out.push(cor611_2(m, "zeta_fibdil").control());
    out.push(eq22(m, "zeta"));
    // Every pointwise hypothesis holds for zeta_B, but the strip is not compact.
    out.push(thm613(m, "Thm6.13.2", "zeta_B", &[B]).control());
    out.push(thm613(m, "Thm6.13.3", "zeta_Bs", &[B, fib(0)]).control());
    out.push(thm613(m, "Thm6.13.5", "zeta_fib", &[fib(0), fib(1)]).control());
}

/// 2-Killing of `ζ` forces 2-Killing of `ζ_B`.
fn cor69_1(m: &Manifest, field: &str) -> Case {
    let z = Z::of(field);
    let eval = point_eval(move |ctx| {
        let zj = z.at(ctx)?;
        Ok(Sample {
            residual: ctx.factor_two_killing(&zj, B),
            hypothesis: ll_max(ctx, &zj),
        })
    });
    Case::new("Cor6.9.1", m, field, TolClass::TwoKilling, eval).hyp("zeta 2-Killing")
}

/// With `ζ_B(f_i) = 0`, 2-Killing of `ζ` forces it on each `ζ_i`.
fn cor69_2(m: &Manifest, field: &str) -> Case {
    let z = Z::of(field);
    let eval = point_eval(move |ctx| {
        let zj = z.at(ctx)?;
        let mut r = 0.0f64;
        let mut hyp = ll_max(ctx, &zj);
        for i in 0..ctx.m() {
            r = r.max(ctx.factor_two_killing(&zj, fib(i)));
            hyp = hyp.max(zb_f(ctx, &zj, i).abs());
        }
        Ok(Sample {
            residual: r,
            hypothesis: hyp,
        })
    });
    Case::new("Cor6.9.2", m, field, TolClass::TwoKilling, eval)
        .hyp("zeta 2-Killing, zeta_B(f_i) = 0")
}

/// Every part 2-Killing on its factor.
fn parts_two_killing(ctx: &PointCtx<'_>, z: &[Jet2]) -> f64 {
    (0..ctx.m()).fold(ctx.factor_two_killing(z, B), |m, i| {
        m.max(ctx.factor_two_killing(z, fib(i)))
    })
}

fn cor610_1(m: &Manifest, field: &str) -> Case {
    let z = Z::of(field);
    let eval = point_eval(move |ctx| {
        let zj = z.at(ctx)?;
        let hyp = (0..ctx.m()).fold(parts_two_killing(ctx, &zj), |h, i| {
            h.max(zb_f(ctx, &zj, i).abs())
        });
        Ok(Sample {
            residual: ll_max(ctx, &zj),
            hypothesis: hyp,
        })
    });
    Case::new("Cor6.10.1", m, field, TolClass::TwoKilling, eval)
        .hyp("zeta_B and each zeta_i 2-Killing, zeta_B(f_i) = 0")
}

fn cor611_1(m: &Manifest, field: &str) -> Case {
    let mut c = cor610_1(m, field);
    c.id = "Cor6.11.1".into();
    c
}

fn cor611_2(m: &Manifest, field: &str) -> Case {
    let z = Z::of(field);
    let eval = point_eval(move |ctx| {
        let zj = z.at(ctx)?;
        let base = values(&ctx.local_jets(&zj, B))
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(Sample {
            residual: ll_max(ctx, &zj),
            hypothesis: parts_two_killing(ctx, &zj).max(base),
        })
    });
    Case::new("Cor6.11.2", m, field, TolClass::TwoKilling, eval)
        .hyp("zeta = sum of 2-Killing zeta_i")
}

/// Homothety constants `c_i` and the largest homothety residual.
fn homothety(ctx: &PointCtx<'_>, z: &[Jet2]) -> (Vec<f64>, f64) {
    let mut cs = Vec::new();
    let mut r = 0.0f64;
    for i in 0..ctx.m() {
        let (c, res) = ctx.factor_homothety(z, fib(i));
        cs.push(c);
        r = r.max(res);
    }
    (cs, r)
}

/// `f_i ζ_B(ζ_B(f_i)) + ζ_B(f_i)² = −2 c_i f_i ζ_B(f_i)` with `ζ_i` homothetic.
fn eq26(m: &Manifest) -> Case {
    let z = Z::of("zeta");
    let eval = point_eval(move |ctx| {
        let zj = z.at(ctx)?;
        let zb = ctx.part(&zj, B);
        let (cs, hres) = homothety(ctx, &zj);
        let mut hyp = parts_two_killing(ctx, &zj).max(hres);
        for (i, c) in cs.iter().enumerate() {
            let (f, zf) = (ctx.fv(i), zb_f(ctx, &zj, i));
            hyp = hyp.max((f * ctx.zzf(i, &zb) + zf * zf + 2.0 * c * f * zf).abs());
        }
        Ok(Sample {
            residual: ll_max(ctx, &zj),
            hypothesis: hyp,
        })
    });
    Case::new("Cor6.10.2", m, "zeta", TolClass::TwoKilling, eval).hyp(
        "zeta_B and each zeta_i 2-Killing, zeta_i homothetic with c_i satisfying the condition",
    )
}

/// `(a/3) f ḟ + (f f̈ + ḟ²)(at − b) = −2c f ḟ (at − b)^{2/3}` over an interval base.
fn prop615(m: &Manifest) -> Case {
    let z = Z::of("zeta");
    let (a, b) = (
        constant(m, "a"),
        m.constants.get("b").copied().unwrap_or(0.0),
    );
    let eval = point_eval(move |ctx| {
        let zj = z.at(ctx)?;
        let s = a * ctx.point.coords()[0] - b;
        let (cs, hres) = homothety(ctx, &zj);
        let mut hyp = parts_two_killing(ctx, &zj).max(hres);
        for (i, c) in cs.iter().enumerate() {
            let (f, fd, fdd) = (ctx.fv(i), ctx.f[i].d(0), ctx.f[i].hess(0, 0));
            let lhs = a / 3.0 * f * fd + (f * fdd + fd * fd) * s;
            hyp = hyp.max((lhs + 2.0 * c * f * fd * s.abs().cbrt().powi(2)).abs());
        }
        Ok(Sample {
            residual: ll_max(ctx, &zj),
            hypothesis: hyp,
        })
    });
    Case::new("Prop6.15", m, "zeta", TolClass::TwoKilling, eval)
        .hyp("each zeta_i 2-Killing and homothetic with c_i satisfying the warping condition")
}

/// `a/3 + (2p_i − 1)(at − b)/φ = −2c_i (at − b)^{2/3}` on a Kasner spacetime.
fn prop617(m: &Manifest) -> Case {
    let z = Z::of("zeta");
    let (a, b) = (
        constant(m, "a"),
        m.constants.get("b").copied().unwrap_or(0.0),
    );
    let (phi, ps, time) = match m.spacetime.as_ref().map(|s| (&s.kind, s)) {
        Some((SpacetimeKind::Kasner { phi, exponents, .. }, s)) => (
            phi.clone(),
            exponents.clone(),
            (s.time.clone(), s.constants.clone()),
        ),
        _ => panic!("Kasner manifest expected"),
    };
    let phi = FieldExpr::parse_with(&phi, &[time.0.as_str()], &time.1)
        .expect("phi parsed with the manifest");
    let eval = point_eval(move |ctx| {
        let zj = z.at(ctx)?;
        let t = ctx.point.coords()[0];
        let s = a * t - b;
        let ph: f64 = phi.eval(&[t])?;
        let (cs, hres) = homothety(ctx, &zj);
        let mut hyp = parts_two_killing(ctx, &zj).max(hres);
        for (c, p) in cs.iter().zip(&ps) {
            let lhs = a / 3.0 + (2.0 * p - 1.0) / ph * s;
            hyp = hyp.max((lhs + 2.0 * c * s.abs().cbrt().powi(2)).abs());
        }
        Ok(Sample {
            residual: ll_max(ctx, &zj),
            hypothesis: hyp,
        })
    });
    Case::new("Prop6.17", m, "zeta", TolClass::TwoKilling, eval)
        .hyp("each zeta_i 2-Killing and homothetic with c_i satisfying the Kasner condition")
}
