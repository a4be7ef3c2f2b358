//! Small builders shared by the registry modules.

use std::sync::Arc;

use crate::fieldexpr::Block;
use crate::jets::Jet2;
use crate::lie::{self, Mat};
use crate::manifest::Manifest;
use crate::metric::GeomError;

use super::context::{values, PointCtx};
use super::sampler::{PtFn, VecFn, VectorJob};
use super::{Case, Eval, Sample, TolClass};

/// A field given as a weighted sum of named manifest fields.
#[derive(Clone, Debug)]
pub(super) struct Z(Vec<(String, f64)>);

impl Z {
    pub fn of(name: &str) -> Self {
        Z(vec![(name.to_string(), 1.0)])
    }

    pub fn sum(terms: &[(&str, f64)]) -> Self {
        Z(terms.iter().map(|(n, c)| (n.to_string(), *c)).collect())
    }

    pub fn at(&self, ctx: &PointCtx<'_>) -> Result<Vec<Jet2>, GeomError> {
        let t: Vec<(&str, f64)> = self.0.iter().map(|(n, c)| (n.as_str(), *c)).collect();
        ctx.combo(&t)
    }
}

pub(super) fn fib(i: usize) -> Block {
    Block::Fiber(i)
}

/// A per-`X` quantity that needs the jets of `ζ`.
pub(super) fn zvec<F>(z: &Z, f: F) -> VecFn
where
    F: Fn(&PointCtx<'_>, &[Jet2], &[f64]) -> f64 + Send + Sync + 'static,
{
    let z = z.clone();
    Arc::new(move |ctx, x| Ok(f(ctx, &z.at(ctx)?, x)))
}

/// A per-point quantity that needs the jets of `ζ`.
pub(super) fn zpt<F>(z: &Z, f: F) -> PtFn
where
    F: Fn(&PointCtx<'_>, &[Jet2]) -> f64 + Send + Sync + 'static,
{
    let z = z.clone();
    Arc::new(move |ctx| Ok(f(ctx, &z.at(ctx)?)))
}

/// `g(∇̄_X ζ, X)`.
pub(super) fn ssm_form(z: &Z) -> VecFn {
    zvec(z, |c, zj, x| c.ssm_form(zj, x))
}

/// `g(∇_X ζ, X)`.
pub(super) fn lc_form(z: &Z) -> VecFn {
    zvec(z, |c, zj, x| c.lc_form(zj, x))
}

/// `g_b(∇^b_{X_b} ζ_b, X_b)` on one factor.
pub(super) fn factor_form(z: &Z, b: Block, ssm: bool) -> VecFn {
    zvec(z, move |c, zj, x| c.factor_form(zj, b, ssm, x))
}

/// Largest factor-form residual over several factors.
pub(super) fn factor_forms(z: &Z, bs: &[Block]) -> VecFn {
    let bs = bs.to_vec();
    zvec(z, move |c, zj, x| {
        bs.iter()
            .fold(0.0f64, |m, b| m.max(c.factor_form(zj, *b, false, x).abs()))
    })
}

/// Killing (or ssm-Killing) residual of `ζ_b` on its factor.
pub(super) fn factor_killing(z: &Z, b: Block, ssm: bool) -> PtFn {
    zpt(z, move |c, zj| c.factor_killing(zj, b, ssm))
}

/// `π(ζ_b)`, with `ζ_b` the part of `ζ` on `b`.
pub(super) fn pi_part(c: &PointCtx<'_>, zj: &[Jet2], b: Block) -> f64 {
    c.pi(&c.proj(&values(zj), b))
}

/// `ζ_B(f_i)`.
pub(super) fn zb_f(c: &PointCtx<'_>, zj: &[Jet2], i: usize) -> f64 {
    c.xf(i, &values(zj))
}

/// `g_b(X_b, ζ_b)` with the unwarped factor metric.
pub(super) fn gz(c: &PointCtx<'_>, zj: &[Jet2], b: Block, x: &[f64]) -> f64 {
    c.gb(b, x, &values(zj))
}

/// `‖X_b‖²_b` with the unwarped factor metric.
pub(super) fn n2(c: &PointCtx<'_>, b: Block, x: &[f64]) -> f64 {
    c.gb(b, x, x)
}

/// `π(X_b)`.
pub(super) fn pi_x(c: &PointCtx<'_>, b: Block, x: &[f64]) -> f64 {
    c.pi(&c.proj(x, b))
}

pub(super) fn job_case(m: &Manifest, id: &str, label: impl Into<String>, job: VectorJob) -> Case {
    Case::new(id, m, label, TolClass::Alg, job.into_eval())
}

/// The statement case on `job` plus its sampler-level control, which draws
/// `X` violating the side conditions.
pub(super) fn with_control(
    out: &mut Vec<Case>,
    m: &Manifest,
    id: &str,
    label: &str,
    hyp: &str,
    job: VectorJob,
) {
    out.push(job_case(m, id, label, job.clone()).hyp(hyp));
    out.push(
        job_case(
            m,
            id,
            format!("{label}, X off the side condition"),
            job.violate(),
        )
        .control()
        .hyp(hyp),
    );
}

/// One sample per point from a matrix-valued residual.
pub(super) fn per_point_matrix<F>(z: &Z, f: F) -> Eval
where
    F: Fn(&PointCtx<'_>, &[Jet2]) -> Mat + Send + Sync + 'static,
{
    let z = z.clone();
    Arc::new(move |ctx, _rng| Ok(vec![Sample::identity(lie::max_abs(&f(ctx, &z.at(ctx)?)))]))
}

/// `L_ζ g` on the product.
pub(super) fn killing_matrix(z: &Z) -> Eval {
    per_point_matrix(z, |c, zj| lie::lie_metric_matrix(&c.geom, zj))
}

/// `L̄_ζ g` on the product.
pub(super) fn ssm_killing_matrix(z: &Z) -> Eval {
    per_point_matrix(z, |c, zj| lie::ssm_lie_metric_matrix(&c.geom, zj, &c.p_vec))
}

/// `L_ζ L_ζ g` on the product.
pub(super) fn two_killing_matrix(z: &Z) -> Eval {
    per_point_matrix(z, |c, zj| lie::lie_lie_metric_matrix(&c.geom, zj))
}

pub(super) fn constant(m: &Manifest, name: &str) -> f64 {
    m.constants.get(name).copied().unwrap_or(1.0)
}
