//! Random test vectors, jet fields, and the admissible-vector sampler.
//!
//! Side conditions quantified over `X` are solved rather than hoped for: from
//! a random `X₀` we move along a random direction `D` inside one block and
//! take the smallest root of the (at most quadratic) condition in `s`.

use std::sync::Arc;

use crate::fieldexpr::Block;
use crate::jets::Jet2;
use crate::metric::GeomError;
use crate::sampling::SplitMix64;

use super::context::PointCtx;
use super::{Eval, Sample};

pub type PtFn = Arc<dyn Fn(&PointCtx<'_>) -> Result<f64, GeomError> + Send + Sync>;
pub type VecFn = Arc<dyn Fn(&PointCtx<'_>, &[f64]) -> Result<f64, GeomError> + Send + Sync>;

/// Attempts per requested vector before giving up at a point.
const RETRIES: usize = 50;
/// A violated side condition must be at least this large.
const VIOLATION: f64 = 1e-3;
/// Largest step accepted along the solve direction.
const MAX_STEP: f64 = 20.0;

/// Uniform components in `[-1, 1]` on the blocks of `support` (all if empty
/// or if it lists `Block::Full`).
pub fn rand_vec(ctx: &PointCtx<'_>, rng: &mut SplitMix64, support: &[Block]) -> Vec<f64> {
    let mut x = vec![0.0; ctx.n()];
    for (k, v) in x.iter_mut().enumerate() {
        let b = ctx.ps().block_of(k);
        if support.is_empty() || support.contains(&b) || support.contains(&Block::Full) {
            *v = rng.range(-1.0, 1.0);
        }
    }
    x
}

/// A random field lifted from `b`: random value and first derivatives along
/// the coordinates of `b`, zero elsewhere. `Block::Full` gives a general field.
pub fn rand_field(ctx: &PointCtx<'_>, rng: &mut SplitMix64, b: Block) -> Vec<Jet2> {
    let n = ctx.n();
    let r = if b == Block::Full {
        0..n
    } else {
        ctx.bc(b).range.clone()
    };
    let zero_h = vec![vec![0.0; n]; n];
    (0..n)
        .map(|k| {
            if !r.contains(&k) {
                return Jet2::constant(0.0);
            }
            let mut grad = vec![0.0; n];
            for c in r.clone() {
                grad[c] = rng.range(-1.0, 1.0);
            }
            Jet2::from_parts(rng.range(-1.0, 1.0), &grad, &zero_h).expect("dimension within bounds")
        })
        .collect()
}

/// Sampling plan for statements quantified over tangent vectors `X`.
#[derive(Clone)]
pub struct VectorJob {
    /// Blocks on which `X` may be nonzero; empty means all.
    pub support: Vec<Block>,
    /// A coordinate of `X` pinned to one of the listed values.
    pub fixed: Option<(usize, Vec<f64>)>,
    /// Side conditions `c(X) = 0`, each solved along a direction in its block.
    pub sides: Vec<(VecFn, Block)>,
    /// Draw `X` violating at least one side condition instead.
    pub violate: bool,
    pub per_point: usize,
    /// Hypotheses on `ζ` and the factors, evaluated once per point.
    pub point_hyps: Vec<PtFn>,
    /// Hypotheses evaluated at each admissible `X` (necessity premises).
    pub vec_hyps: Vec<VecFn>,
    pub conclusion: VecFn,
}

impl VectorJob {
    pub fn new(conclusion: VecFn) -> Self {
        Self {
            support: Vec::new(),
            fixed: None,
            sides: Vec::new(),
            violate: false,
            per_point: 4,
            point_hyps: Vec::new(),
            vec_hyps: Vec::new(),
            conclusion,
        }
    }

    pub fn support(mut self, blocks: &[Block]) -> Self {
        self.support = blocks.to_vec();
        self
    }

    pub fn fixed(mut self, coord: usize, values: &[f64]) -> Self {
        self.fixed = Some((coord, values.to_vec()));
        self
    }

    pub fn side(mut self, f: VecFn, solve_in: Block) -> Self {
        self.sides.push((f, solve_in));
        self
    }

    pub fn violate(mut self) -> Self {
        self.violate = true;
        self
    }

    pub fn hyp(mut self, f: PtFn) -> Self {
        self.point_hyps.push(f);
        self
    }

    pub fn vec_hyp(mut self, f: VecFn) -> Self {
        self.vec_hyps.push(f);
        self
    }

    fn draw(&self, ctx: &PointCtx<'_>, rng: &mut SplitMix64) -> Vec<f64> {
        let mut x = rand_vec(ctx, rng, &self.support);
        if let Some((c, vals)) = &self.fixed {
            x[*c] = vals[(rng.next_u64() % vals.len() as u64) as usize];
        }
        x
    }

    fn direction(&self, ctx: &PointCtx<'_>, rng: &mut SplitMix64, b: Block) -> Vec<f64> {
        let mut d = rand_vec(ctx, rng, &[b]);
        if let Some((c, _)) = &self.fixed {
            d[*c] = 0.0;
        }
        d
    }

    fn side_values(&self, ctx: &PointCtx<'_>, x: &[f64]) -> Result<Vec<f64>, GeomError> {
        self.sides.iter().map(|(f, _)| f(ctx, x)).collect()
    }

    /// An admissible `X`, or `None` when no attempt satisfied the plan.
    pub fn admissible(
        &self,
        ctx: &PointCtx<'_>,
        rng: &mut SplitMix64,
    ) -> Result<Option<Vec<f64>>, GeomError> {
        'attempt: for _ in 0..RETRIES {
            let mut x = self.draw(ctx, rng);
            let scale = 1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs())).powi(2);
            if self.violate {
                let worst = self
                    .side_values(ctx, &x)?
                    .iter()
                    .fold(0.0f64, |m, v| m.max(v.abs()));
                if worst > VIOLATION * scale {
                    return Ok(Some(x));
                }
                continue;
            }
            for (f, b) in &self.sides {
                let q0 = f(ctx, &x)?;
                if q0.abs() <= 1e-13 * scale {
                    continue;
                }
                let d = self.direction(ctx, rng, *b);
                let at =
                    |s: f64| -> Vec<f64> { x.iter().zip(&d).map(|(a, b)| a + s * b).collect() };
                let qp = f(ctx, &at(1.0))?;
                let qm = f(ctx, &at(-1.0))?;
                let a2 = 0.5 * (qp + qm) - q0;
                let a1 = 0.5 * (qp - qm);
                let s = if a2.abs() <= 1e-14 * (a1.abs() + q0.abs() + 1.0) {
                    if a1.abs() <= 1e-14 {
                        continue 'attempt;
                    }
                    -q0 / a1
                } else {
                    let disc = a1 * a1 - 4.0 * a2 * q0;
                    if disc < 0.0 {
                        continue 'attempt;
                    }
                    let sq = disc.sqrt();
                    // Numerically stable pair of roots.
                    let qq = -0.5 * (a1 + a1.signum() * sq);
                    let r1 = qq / a2;
                    let r2 = if qq != 0.0 { q0 / qq } else { r1 };
                    if r1.abs() < r2.abs() {
                        r1
                    } else {
                        r2
                    }
                };
                if !s.is_finite() || s.abs() > MAX_STEP {
                    continue 'attempt;
                }
                x = at(s);
            }
            if self.fixed.is_none() {
                // Conditions without a pinned coordinate are homogeneous in X.
                let big = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                if big > 1.0 {
                    x.iter_mut().for_each(|v| *v /= big);
                }
            }
            let scale = 1.0 + x.iter().fold(0.0f64, |m, v| m.max(v.abs())).powi(2);
            let ok = self
                .side_values(ctx, &x)?
                .iter()
                .all(|v| v.abs() <= 1e-11 * scale);
            if ok {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    pub fn into_eval(self) -> Eval {
        Arc::new(move |ctx, rng| {
            let mut h0 = 0.0f64;
            for h in &self.point_hyps {
                h0 = h0.max(h(ctx)?.abs());
            }
            let mut out = Vec::with_capacity(self.per_point);
            for _ in 0..self.per_point {
                let Some(x) = self.admissible(ctx, rng)? else {
                    continue;
                };
                let mut hyp = h0;
                for h in &self.vec_hyps {
                    hyp = hyp.max(h(ctx, &x)?.abs());
                }
                for v in self.side_values(ctx, &x)? {
                    hyp = hyp.max(v.abs());
                }
                out.push(Sample {
                    residual: (self.conclusion)(ctx, &x)?.abs(),
                    hypothesis: hyp,
                });
            }
            Ok(out)
        })
    }
}
