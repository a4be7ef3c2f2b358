//! Structural cases valid on every manifest: connection axioms, the
//! covariant-derivative lemmas on the product, and the decompositions of
//! Lie derivatives, second Lie derivatives and `Tr(∇ζ)²` into factor terms.

use std::sync::Arc;

use crate::connection::{
    christoffel, metric_compatibility_residual, semi_symmetric, TorsionLocation,
};
use crate::coordinate::{bracket, lie_lie_metric_direct, lie_metric_direct, metric_jets};
use crate::curvature::{trace_nabla_zeta, trace_nabla_zeta_coordinate};
use crate::fieldexpr::Block;
use crate::jets::Jet2;
use crate::lie::{self, form, lie_lie_metric_matrix, lie_metric_matrix, ssm_lie_metric_matrix};
use crate::manifest::Manifest;
use crate::metric::{divergence, GeomError};
use crate::sampling::SplitMix64;

use super::context::{values, PointCtx};
use super::sampler::{rand_field, rand_vec};
use super::{rel, rel_vec, Case, Eval, Sample, TolClass};

/// `k` identity samples per point.
pub(super) fn per_point<F>(k: usize, f: F) -> Eval
where
    F: Fn(&PointCtx<'_>, &mut SplitMix64) -> Result<f64, GeomError> + Send + Sync + 'static,
{
    Arc::new(move |ctx, rng| (0..k).map(|_| f(ctx, rng).map(Sample::identity)).collect())
}

fn fibers(ctx: &PointCtx<'_>) -> impl Iterator<Item = (usize, Block)> {
    (0..ctx.m()).map(|i| (i, Block::Fiber(i)))
}

fn mat_rel(a: &lie::Mat, b: &[Vec<f64>]) -> f64 {
    let a: Vec<f64> = a.iter().flatten().copied().collect();
    let b: Vec<f64> = b.iter().flatten().copied().collect();
    rel_vec(&a, &b)
}

// ---------------------------------------------------------------------------
// Factor-term right-hand sides of the decompositions.

/// `ζ_B(f_i)`.
pub(super) fn zb_f(ctx: &PointCtx<'_>, z: &[Jet2], i: usize) -> f64 {
    ctx.xf(i, &values(&ctx.part(z, Block::Base)))
}

fn lie_form(ctx: &PointCtx<'_>, z: &[Jet2], b: Block, ssm: bool, x: &[f64], y: &[f64]) -> f64 {
    form(
        &ctx.factor_lie(z, b, ssm),
        &ctx.local(x, b),
        &ctx.local(y, b),
    )
}

/// `L̄_ζ g(X, Y)` in factor terms for `P` in the base.
pub(super) fn rhs_lie_ssm_base(ctx: &PointCtx<'_>, z: &[Jet2], x: &[f64], y: &[f64]) -> f64 {
    let pi_zb = ctx.pi(&values(&ctx.part(z, Block::Base)));
    let (pxb, pyb) = (
        ctx.pi(&ctx.proj(x, Block::Base)),
        ctx.pi(&ctx.proj(y, Block::Base)),
    );
    let mut s = lie_form(ctx, z, Block::Base, true, x, y);
    for (i, b) in fibers(ctx) {
        let f = ctx.fv(i);
        let zi = values(&ctx.part(z, b));
        s += f * f * lie_form(ctx, z, b, false, x, y);
        s += 2.0 * (f * zb_f(ctx, z, i) + f * f * pi_zb) * ctx.gb(b, x, y);
        s -= f * f * ctx.gb(b, x, &zi) * pyb;
        s -= f * f * ctx.gb(b, y, &zi) * pxb;
    }
    s
}

/// `L̄_ζ g(X, Y)` in factor terms for `P` in a fiber.
pub(super) fn rhs_lie_ssm_fiber(ctx: &PointCtx<'_>, z: &[Jet2], x: &[f64], y: &[f64]) -> f64 {
    let zv = values(z);
    let mut s = lie_form(ctx, z, Block::Base, false, x, y);
    for (i, b) in fibers(ctx) {
        let f = ctx.fv(i);
        let zi = values(&ctx.part(z, b));
        s += f * f * lie_form(ctx, z, b, false, x, y);
        s += 2.0 * ctx.pi(&zi) * ctx.inner(x, y);
        s += 2.0 * f * zb_f(ctx, z, i) * ctx.gb(b, x, y);
        s -= ctx.pi(&ctx.proj(y, b)) * ctx.inner(x, &zv);
        s -= ctx.pi(&ctx.proj(x, b)) * ctx.inner(y, &zv);
    }
    s
}

/// `g(∇̄_X ζ, X)` in factor terms for `P` in the base.
pub(super) fn rhs_form_ssm_base(ctx: &PointCtx<'_>, z: &[Jet2], x: &[f64]) -> f64 {
    let pi_zb = ctx.pi(&values(&ctx.part(z, Block::Base)));
    let pxb = ctx.pi(&ctx.proj(x, Block::Base));
    let mut s = ctx.factor_form(z, Block::Base, true, x);
    for (i, b) in fibers(ctx) {
        let f = ctx.fv(i);
        let zi = values(&ctx.part(z, b));
        s += f * f * ctx.factor_form(z, b, false, x);
        s -= f * f * pxb * ctx.gb(b, x, &zi);
        s += (f * zb_f(ctx, z, i) + f * f * pi_zb) * ctx.gb(b, x, x);
    }
    s
}

/// `g(∇̄_X ζ, X)` in factor terms for `P` in a fiber.
pub(super) fn rhs_form_ssm_fiber(ctx: &PointCtx<'_>, z: &[Jet2], x: &[f64]) -> f64 {
    let zv = values(z);
    let mut s = ctx.factor_form(z, Block::Base, false, x);
    for (i, b) in fibers(ctx) {
        let f = ctx.fv(i);
        let zi = values(&ctx.part(z, b));
        s += f * f * ctx.factor_form(z, b, false, x);
        s += ctx.pi(&zi) * ctx.norm2(x);
        s += f * zb_f(ctx, z, i) * ctx.gb(b, x, x);
        s -= ctx.pi(&ctx.proj(x, b)) * ctx.inner(x, &zv);
    }
    s
}

/// `L_ζ g(X, Y)` in factor terms.
pub(super) fn rhs_lie_lc(ctx: &PointCtx<'_>, z: &[Jet2], x: &[f64], y: &[f64]) -> f64 {
    let mut s = lie_form(ctx, z, Block::Base, false, x, y);
    for (i, b) in fibers(ctx) {
        let f = ctx.fv(i);
        s += f * f * lie_form(ctx, z, b, false, x, y);
        s += 2.0 * f * zb_f(ctx, z, i) * ctx.gb(b, x, y);
    }
    s
}

/// `g(∇_X ζ, X)` in factor terms.
pub(super) fn rhs_form_lc(ctx: &PointCtx<'_>, z: &[Jet2], x: &[f64]) -> f64 {
    let mut s = ctx.factor_form(z, Block::Base, false, x);
    for (i, b) in fibers(ctx) {
        let f = ctx.fv(i);
        s += f * f * ctx.factor_form(z, b, false, x);
        s += f * zb_f(ctx, z, i) * ctx.gb(b, x, x);
    }
    s
}

/// `L_ζ L_ζ g(X, Y)` in factor terms.
pub(super) fn rhs_lie_lie(ctx: &PointCtx<'_>, z: &[Jet2], x: &[f64], y: &[f64]) -> f64 {
    let zb = ctx.part(z, Block::Base);
    let base = &ctx.bc(Block::Base).geom;
    let llb = lie_lie_metric_matrix(base, &ctx.local_jets(z, Block::Base));
    let mut s = form(&llb, &ctx.local(x, Block::Base), &ctx.local(y, Block::Base));
    for (i, b) in fibers(ctx) {
        let f = ctx.fv(i);
        let zf = zb_f(ctx, z, i);
        let (xl, yl) = (ctx.local(x, b), ctx.local(y, b));
        let g = &ctx.bc(b).geom;
        let zl = ctx.local_jets(z, b);
        s += f * f * form(&lie_lie_metric_matrix(g, &zl), &xl, &yl);
        s += 4.0 * f * zf * form(&lie_metric_matrix(g, &zl), &xl, &yl);
        s += 2.0 * (f * ctx.zzf(i, &zb) + zf * zf) * g.inner(&xl, &yl);
    }
    s
}

/// `Tr(∇ζ)²` in factor terms.
pub(super) fn rhs_trace(ctx: &PointCtx<'_>, z: &[Jet2]) -> f64 {
    let base = &ctx.bc(Block::Base).geom;
    let mut s = trace_nabla_zeta_coordinate(base, &ctx.local_jets(z, Block::Base));
    for (i, b) in fibers(ctx) {
        let f = ctx.fv(i);
        let zf = zb_f(ctx, z, i);
        let g = &ctx.bc(b).geom;
        let zl = ctx.local_jets(z, b);
        let zi = values(&zl);
        s += trace_nabla_zeta_coordinate(g, &zl);
        s += 2.0 * g.inner(&zi, &zi) * ctx.grad_f_norm2(i);
        s += g.n as f64 / (f * f) * zf * zf;
        s += 2.0 * zf / f * divergence(g, &zl);
    }
    s
}

/// `Tr(∇ζ)²` on the product through a block-adapted frame.
pub(super) fn lhs_trace(ctx: &PointCtx<'_>, z: &[Jet2]) -> Result<f64, GeomError> {
    let ranges: Vec<_> = ctx.blocks.iter().map(|b| b.range.clone()).collect();
    trace_nabla_zeta(&ctx.geom, z, &ranges)
}

// ---------------------------------------------------------------------------
// Covariant derivatives of lifted fields.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Item {
    /// `∇_{X_B} Y_B`
    BaseBase,
    /// `∇_{X_B} Y_i`
    BaseFiber,
    /// `∇_{Y_i} X_B`
    FiberBase,
    /// `∇_{X_i} Y_j`, `i ≠ j`
    Cross,
    /// `∇_{X_i} Y_i`
    Same,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flavor {
    /// Semi-symmetric with `P` in the base (or zero).
    SsmBase,
    /// Semi-symmetric with `P` in a fiber.
    SsmFiber,
    LeviCivita,
}

fn factor_nabla(ctx: &PointCtx<'_>, b: Block, ssm: bool, x: &[f64], y: &[Jet2]) -> Vec<f64> {
    let g = &ctx.bc(b).geom;
    let conn = if ssm {
        semi_symmetric(g, &ctx.p_local(b))
    } else {
        christoffel(g)
    };
    ctx.embed(&conn.nabla(&ctx.local(x, b), &ctx.local_jets(y, b)), b)
}

fn axpy(out: &mut [f64], a: f64, v: &[f64]) {
    for (o, x) in out.iter_mut().zip(v) {
        *o += a * x;
    }
}

fn lemma_residual(ctx: &PointCtx<'_>, rng: &mut SplitMix64, item: Item, flavor: Flavor) -> f64 {
    let m = ctx.m();
    let i = if m > 0 {
        (rng.next_u64() % m as u64) as usize
    } else {
        0
    };
    let j = if m > 1 {
        (i + 1 + (rng.next_u64() % (m as u64 - 1)) as usize) % m
    } else {
        i
    };
    let conn = if flavor == Flavor::LeviCivita {
        &ctx.lc
    } else {
        &ctx.ssm
    };
    let ssm = flavor != Flavor::LeviCivita;
    let (bi, bj) = (Block::Fiber(i), Block::Fiber(j));
    let (lhs, rhs) = match item {
        Item::BaseBase => {
            let (x, y) = (
                rand_field(ctx, rng, Block::Base),
                rand_field(ctx, rng, Block::Base),
            );
            let (xv, yv) = (values(&x), values(&y));
            let lhs = conn.nabla(&xv, &y);
            let mut rhs = factor_nabla(ctx, Block::Base, flavor == Flavor::SsmBase, &xv, &y);
            if flavor == Flavor::SsmFiber {
                axpy(&mut rhs, -ctx.gb(Block::Base, &xv, &yv), &ctx.p_vec);
            }
            (lhs, rhs)
        }
        Item::BaseFiber => {
            let (x, y) = (rand_field(ctx, rng, Block::Base), rand_field(ctx, rng, bi));
            let (xv, yv) = (values(&x), values(&y));
            let lhs = conn.nabla(&xv, &y);
            let mut rhs = vec![0.0; ctx.n()];
            axpy(&mut rhs, ctx.xf(i, &xv) / ctx.fv(i), &yv);
            if flavor == Flavor::SsmFiber {
                axpy(&mut rhs, ctx.pi(&yv), &xv);
            }
            (lhs, rhs)
        }
        Item::FiberBase => {
            let (x, y) = (rand_field(ctx, rng, Block::Base), rand_field(ctx, rng, bi));
            let (xv, yv) = (values(&x), values(&y));
            let lhs = conn.nabla(&yv, &x);
            let mut c = ctx.xf(i, &xv) / ctx.fv(i);
            if flavor == Flavor::SsmBase {
                c += ctx.pi(&xv);
            }
            let mut rhs = vec![0.0; ctx.n()];
            axpy(&mut rhs, c, &yv);
            (lhs, rhs)
        }
        Item::Cross => {
            let (x, y) = (rand_field(ctx, rng, bi), rand_field(ctx, rng, bj));
            let (xv, yv) = (values(&x), values(&y));
            let lhs = conn.nabla(&xv, &y);
            let mut rhs = vec![0.0; ctx.n()];
            if flavor == Flavor::SsmFiber {
                axpy(&mut rhs, ctx.pi(&yv), &xv);
            }
            (lhs, rhs)
        }
        Item::Same => {
            let (x, y) = (rand_field(ctx, rng, bi), rand_field(ctx, rng, bi));
            let (xv, yv) = (values(&x), values(&y));
            let lhs = conn.nabla(&xv, &y);
            let f = ctx.fv(i);
            let gi = ctx.gb(bi, &xv, &yv);
            let mut rhs = factor_nabla(ctx, bi, false, &xv, &y);
            axpy(&mut rhs, -f * gi, &ctx.grad_f(i));
            if flavor == Flavor::SsmFiber {
                axpy(&mut rhs, ctx.pi(&yv), &xv);
            }
            if ssm {
                axpy(&mut rhs, -f * f * gi, &ctx.p_vec);
            }
            (lhs, rhs)
        }
    };
    rel_vec(&lhs, &rhs)
}

/// A lemma id, its connection and its numbered items.
type LemmaGroup = (String, Flavor, Vec<(&'static str, Item)>);

fn lemma_cases(m: &Manifest) -> Vec<Case> {
    let nf = m.structure.m();
    let loc = m.torsion.location;
    let mut groups: Vec<LemmaGroup> = vec![(
        "Lemma6.7".into(),
        Flavor::LeviCivita,
        vec![
            ("1", Item::BaseBase),
            ("2a", Item::BaseFiber),
            ("2b", Item::FiberBase),
            ("4a", Item::Cross),
            ("4b", Item::Same),
        ],
    )];
    let five = |a: &'static str| {
        vec![
            ("1", Item::BaseBase),
            ("2", Item::BaseFiber),
            ("3", Item::FiberBase),
            (a, Item::Cross),
            (if a == "4" { "5" } else { "4b" }, Item::Same),
        ]
    };
    let four = vec![
        ("1", Item::BaseBase),
        ("2", Item::BaseFiber),
        ("3", Item::FiberBase),
        ("4", Item::Same),
    ];
    match loc {
        TorsionLocation::Zero | TorsionLocation::Base => {
            groups.push(("Lemma4.1".into(), Flavor::SsmBase, five("4")));
            if nf == 1 {
                groups.push(("Lemma3.1".into(), Flavor::SsmBase, four));
            }
        }
        TorsionLocation::Fiber(_) => {
            groups.push(("Lemma4.2".into(), Flavor::SsmFiber, five("4a")));
            if nf == 1 {
                groups.push(("Lemma3.2".into(), Flavor::SsmFiber, four));
            }
        }
    }
    let mut out = Vec::new();
    for (id, flavor, items) in groups {
        for (k, item) in items {
            let needs = match item {
                Item::BaseBase => 0,
                Item::Cross => 2,
                _ => 1,
            };
            if nf < needs {
                continue;
            }
            out.push(
                Case::new(
                    &format!("{id}.{k}"),
                    m,
                    format!("P {loc}"),
                    TolClass::Alg,
                    per_point(4, move |ctx, rng| {
                        Ok(lemma_residual(ctx, rng, item, flavor))
                    }),
                )
                .hyp("random lifted fields X, Y"),
            );
        }
    }
    out
}

// ---------------------------------------------------------------------------

fn axiom_cases(m: &Manifest) -> Vec<Case> {
    let label = format!("P {}", m.torsion.location);
    vec![
        Case::new(
            "Eq2",
            m,
            label.clone(),
            TolClass::Alg,
            per_point(4, |ctx, rng| {
                let x = rand_field(ctx, rng, Block::Full);
                let y = rand_field(ctx, rng, Block::Full);
                let (xv, yv) = (values(&x), values(&y));
                let br = bracket(&x, &y);
                let a = ctx.ssm.nabla(&xv, &y);
                let b = ctx.ssm.nabla(&yv, &x);
                let t: Vec<f64> = (0..ctx.n()).map(|k| a[k] - b[k] - br[k]).collect();
                let mut rhs = vec![0.0; ctx.n()];
                axpy(&mut rhs, ctx.pi(&yv), &xv);
                axpy(&mut rhs, -ctx.pi(&xv), &yv);
                Ok(rel_vec(&t, &rhs))
            }),
        )
        .hyp("torsion of the connection against π(Y)X − π(X)Y"),
        Case::new(
            "Eq3",
            m,
            label,
            TolClass::Alg,
            per_point(4, |ctx, rng| {
                let x = rand_vec(ctx, rng, &[]);
                let y = rand_vec(ctx, rng, &[]);
                let z = rand_vec(ctx, rng, &[]);
                Ok(metric_compatibility_residual(
                    &ctx.geom, &ctx.ssm, &x, &y, &z,
                ))
            }),
        )
        .hyp("metric compatibility of the connection"),
        Case::new(
            "Riemann.sym",
            m,
            "",
            TolClass::Alg,
            per_point(1, |ctx, _| Ok(ctx.curvature().symmetry_residual())),
        )
        .hyp("pair symmetries and the first Bianchi identity"),
    ]
}

type FieldCheck = fn(&PointCtx<'_>, &mut SplitMix64, &[Jet2]) -> Result<f64, GeomError>;

fn field_case(m: &Manifest, id: &str, field: &str, tol: TolClass, k: usize, f: FieldCheck) -> Case {
    let name = field.to_string();
    Case::new(
        id,
        m,
        format!("field={field}"),
        tol,
        per_point(k, move |ctx, rng| {
            let z = ctx.field(&name)?;
            f(ctx, rng, &z)
        }),
    )
}

fn field_cases(m: &Manifest) -> Vec<Case> {
    let nf = m.structure.m();
    let loc = m.torsion.location;
    let mut out = Vec::new();
    for name in m.field_names() {
        let mut add = |id: &str, tol: TolClass, k: usize, f: FieldCheck| {
            out.push(field_case(m, id, name, tol, k, f));
        };
        add("Eq4", TolClass::TwoKilling, 2, |ctx, rng, z| {
            let (x, y) = (rand_vec(ctx, rng, &[]), rand_vec(ctx, rng, &[]));
            let gj = metric_jets(ctx.ps(), &ctx.point)?;
            Ok(rel(
                lie::lie_metric(&ctx.geom, z, &x, &y),
                lie_metric_direct(&gj, z, &x, &y),
            ))
        });
        add("Lemma3.7", TolClass::Alg, 2, |ctx, rng, z| {
            let x = rand_vec(ctx, rng, &[]);
            let gj = metric_jets(ctx.ps(), &ctx.point)?;
            Ok(rel(
                2.0 * ctx.lc_form(z, &x),
                lie_metric_direct(&gj, z, &x, &x),
            ))
        });
        add("Lemma3.8", TolClass::Alg, 2, |ctx, rng, z| {
            let x = rand_vec(ctx, rng, &[]);
            let zv = values(z);
            let gj = metric_jets(ctx.ps(), &ctx.point)?;
            let l = lie_metric_direct(&gj, z, &x, &x) + 2.0 * ctx.pi(&zv) * ctx.norm2(&x)
                - 2.0 * ctx.inner(&x, &zv) * ctx.pi(&x);
            Ok(rel(2.0 * ctx.ssm_form(z, &x), l))
        });
        add("Def3.5", TolClass::Alg, 2, |ctx, rng, z| {
            let (x, y) = (rand_vec(ctx, rng, &[]), rand_vec(ctx, rng, &[]));
            let l = ctx.inner(&ctx.ssm.nabla(&x, z), &y) + ctx.inner(&ctx.ssm.nabla(&y, z), &x);
            Ok(rel(
                l,
                lie::ssm_lie_metric(&ctx.geom, z, &ctx.p_vec, &x, &y),
            ))
        });
        add("Remark3.9", TolClass::Alg, 2, |ctx, rng, z| {
            let x = rand_vec(ctx, rng, &[]);
            let zv = values(z);
            let r =
                ctx.lc_form(z, &x) + ctx.pi(&zv) * ctx.norm2(&x) - ctx.pi(&x) * ctx.inner(&x, &zv);
            Ok(rel(ctx.ssm_form(z, &x), r))
        });
        if loc == TorsionLocation::Zero {
            add("Remark3.11", TolClass::Alg, 1, |ctx, _, z| {
                let a = ssm_lie_metric_matrix(&ctx.geom, z, &ctx.p_vec);
                Ok(mat_rel(&a, &lie_metric_matrix(&ctx.geom, z)))
            });
        }
        add("Eq21", TolClass::TwoKilling, 1, |ctx, _, z| {
            let gj = metric_jets(ctx.ps(), &ctx.point)?;
            Ok(mat_rel(
                &lie_lie_metric_matrix(&ctx.geom, z),
                &lie_lie_metric_direct(&gj, z),
            ))
        });
        add("Eq22.identity", TolClass::TwoKilling, 2, |ctx, rng, z| {
            let x = rand_vec(ctx, rng, &[]);
            let zv = values(z);
            let ll = form(&lie_lie_metric_matrix(&ctx.geom, z), &x, &x);
            let nx = lie::apply(&lie::nabla_zeta(&ctx.geom, z), &x);
            let r = -ctx.curvature().r4(&zv, &x, &x, &zv)
                + ctx.inner(&lie::nabla_x_nabla_zeta_zeta(&ctx.geom, z, &x), &x)
                + ctx.inner(&nx, &nx);
            Ok(rel(0.5 * ll, r))
        });
        if nf == 0 {
            continue;
        }
        let ssm_ids: &[(&str, bool)] = match loc {
            TorsionLocation::Zero | TorsionLocation::Base if nf == 1 => &[
                ("Eq10", true),
                ("Eq12", false),
                ("Eq14", true),
                ("Eq16", false),
            ],
            TorsionLocation::Zero | TorsionLocation::Base => &[("Eq14", true), ("Eq16", false)],
            TorsionLocation::Fiber(_) if nf == 1 => &[
                ("Eq11", true),
                ("Eq13", false),
                ("Eq15", true),
                ("Eq17", false),
            ],
            TorsionLocation::Fiber(_) => &[("Eq15", true), ("Eq17", false)],
        };
        let in_base = !matches!(loc, TorsionLocation::Fiber(_));
        for &(id, is_lie) in ssm_ids {
            let f: FieldCheck = match (in_base, is_lie) {
                (true, true) => |ctx, rng, z| {
                    let (x, y) = (rand_vec(ctx, rng, &[]), rand_vec(ctx, rng, &[]));
                    let l = lie::ssm_lie_metric(&ctx.geom, z, &ctx.p_vec, &x, &y);
                    Ok(rel(l, rhs_lie_ssm_base(ctx, z, &x, &y)))
                },
                (true, false) => |ctx, rng, z| {
                    let x = rand_vec(ctx, rng, &[]);
                    Ok(rel(ctx.ssm_form(z, &x), rhs_form_ssm_base(ctx, z, &x)))
                },
                (false, true) => |ctx, rng, z| {
                    let (x, y) = (rand_vec(ctx, rng, &[]), rand_vec(ctx, rng, &[]));
                    let l = lie::ssm_lie_metric(&ctx.geom, z, &ctx.p_vec, &x, &y);
                    Ok(rel(l, rhs_lie_ssm_fiber(ctx, z, &x, &y)))
                },
                (false, false) => |ctx, rng, z| {
                    let x = rand_vec(ctx, rng, &[]);
                    Ok(rel(ctx.ssm_form(z, &x), rhs_form_ssm_fiber(ctx, z, &x)))
                },
            };
            add(id, TolClass::Alg, 2, f);
        }
        add("Eq18", TolClass::Alg, 2, |ctx, rng, z| {
            let (x, y) = (rand_vec(ctx, rng, &[]), rand_vec(ctx, rng, &[]));
            Ok(rel(
                lie::lie_metric(&ctx.geom, z, &x, &y),
                rhs_lie_lc(ctx, z, &x, &y),
            ))
        });
        add("Eq19", TolClass::Alg, 2, |ctx, rng, z| {
            let x = rand_vec(ctx, rng, &[]);
            Ok(rel(ctx.lc_form(z, &x), rhs_form_lc(ctx, z, &x)))
        });
        add("Eq25", TolClass::Fd, 2, |ctx, rng, z| {
            let (x, y) = (rand_vec(ctx, rng, &[]), rand_vec(ctx, rng, &[]));
            let ll = form(&lie_lie_metric_matrix(&ctx.geom, z), &x, &y);
            Ok(rel(ll, rhs_lie_lie(ctx, z, &x, &y)))
        });
        add("Eq27", TolClass::Fd, 1, |ctx, _, z| {
            Ok(rel(lhs_trace(ctx, z)?, rhs_trace(ctx, z)))
        });
    }
    out
}

pub(super) fn cases(m: &Manifest) -> Vec<Case> {
    let mut out = axiom_cases(m);
    out.extend(lemma_cases(m));
    out.extend(field_cases(m));
    out
}
