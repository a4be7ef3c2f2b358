//! Everything a check needs at one sample point, computed once and shared.

use std::ops::Range;
use std::sync::OnceLock;

use crate::connection::{christoffel, semi_symmetric, ConnectionAt};
use crate::curvature::CurvatureAt;
use crate::fieldexpr::Block;
use crate::jets::{Jet2, Point};
use crate::lie::{self, Mat};
use crate::manifest::Manifest;
use crate::metric::{GeomError, LocalGeometry, ProductStructure};

/// One factor seen in its own chart, with its unwarped metric.
#[derive(Debug)]
pub struct BlockCtx {
    pub block: Block,
    pub range: Range<usize>,
    pub point: Point,
    pub geom: LocalGeometry,
}

#[derive(Debug)]
pub struct PointCtx<'m> {
    pub manifest: &'m Manifest,
    pub point: Point,
    pub geom: LocalGeometry,
    /// Components of `P` on the product chart.
    pub p_vec: Vec<f64>,
    pub lc: ConnectionAt,
    pub ssm: ConnectionAt,
    /// Base first, then the fibers in order.
    pub blocks: Vec<BlockCtx>,
    /// Warping functions as jets over the full chart.
    pub f: Vec<Jet2>,
    curvature: OnceLock<CurvatureAt>,
}

impl<'m> PointCtx<'m> {
    pub fn new(manifest: &'m Manifest, point: Point) -> Result<Self, GeomError> {
        let ps = &manifest.structure;
        let geom = LocalGeometry::at(ps, &point)?;
        let p_vec = manifest.torsion.values(ps, &point)?;
        let lc = christoffel(&geom);
        let ssm = semi_symmetric(&geom, &p_vec);
        let mut blocks = Vec::new();
        for block in ps.blocks() {
            let range = ps.block_range(block);
            let bp = point.slice(range.clone());
            let bm = ps.block_metric(block).expect("factor block");
            blocks.push(BlockCtx {
                block,
                range,
                geom: LocalGeometry::at(bm, &bp)?,
                point: bp,
            });
        }
        let f = (0..ps.m())
            .map(|i| ps.warping_jet(i, &point))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            manifest,
            point,
            geom,
            p_vec,
            lc,
            ssm,
            blocks,
            f,
            curvature: OnceLock::new(),
        })
    }

    pub fn ps(&self) -> &ProductStructure {
        &self.manifest.structure
    }

    pub fn n(&self) -> usize {
        self.geom.n
    }

    pub fn m(&self) -> usize {
        self.f.len()
    }

    pub fn bc(&self, b: Block) -> &BlockCtx {
        match b {
            Block::Base => &self.blocks[0],
            Block::Fiber(i) => &self.blocks[i + 1],
            Block::Full => panic!("no factor context for the full chart"),
        }
    }

    pub fn curvature(&self) -> &CurvatureAt {
        self.curvature
            .get_or_init(|| CurvatureAt::from_geometry(&self.geom))
    }

    /// Jets of a named manifest field on the product chart.
    pub fn field(&self, name: &str) -> Result<Vec<Jet2>, GeomError> {
        let vf = self
            .manifest
            .field(name)
            .ok_or_else(|| GeomError::Invalid(format!("manifest has no field `{name}`")))?;
        vf.jets(self.ps(), &self.point)
    }

    /// `Σ c_k ζ_k` over named fields.
    pub fn combo(&self, terms: &[(&str, f64)]) -> Result<Vec<Jet2>, GeomError> {
        let mut out = vec![Jet2::constant(0.0); self.n()];
        for (name, c) in terms {
            for (o, z) in out.iter_mut().zip(self.field(name)?) {
                *o = *o + z.scale(*c);
            }
        }
        Ok(out)
    }

    /// The part of `z` lifted from `b`, still on the product chart.
    pub fn part(&self, z: &[Jet2], b: Block) -> Vec<Jet2> {
        let r = self.bc(b).range.clone();
        z.iter()
            .enumerate()
            .map(|(k, j)| {
                if r.contains(&k) {
                    *j
                } else {
                    Jet2::constant(0.0)
                }
            })
            .collect()
    }

    /// The part of `z` lifted from `b`, on that factor's own chart.
    pub fn local_jets(&self, z: &[Jet2], b: Block) -> Vec<Jet2> {
        let r = self.bc(b).range.clone();
        z[r.clone()].iter().map(|j| j.restrict(r.clone())).collect()
    }

    pub fn proj(&self, x: &[f64], b: Block) -> Vec<f64> {
        let r = &self.bc(b).range;
        x.iter()
            .enumerate()
            .map(|(k, v)| if r.contains(&k) { *v } else { 0.0 })
            .collect()
    }

    pub fn local(&self, x: &[f64], b: Block) -> Vec<f64> {
        x[self.bc(b).range.clone()].to_vec()
    }

    pub fn embed(&self, v: &[f64], b: Block) -> Vec<f64> {
        let mut out = vec![0.0; self.n()];
        let r = self.bc(b).range.clone();
        out[r].copy_from_slice(v);
        out
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        self.geom.inner(x, y)
    }

    pub fn norm2(&self, x: &[f64]) -> f64 {
        self.geom.inner(x, x)
    }

    /// `g_b(X_b, Y_b)` with the unwarped factor metric.
    pub fn gb(&self, b: Block, x: &[f64], y: &[f64]) -> f64 {
        self.bc(b).geom.inner(&self.local(x, b), &self.local(y, b))
    }

    pub fn pi(&self, x: &[f64]) -> f64 {
        self.inner(x, &self.p_vec)
    }

    /// `f_i` at the point.
    pub fn fv(&self, i: usize) -> f64 {
        self.f[i].value()
    }

    /// `X(f_i)` for a product vector `X` (only its base part matters).
    pub fn xf(&self, i: usize, x: &[f64]) -> f64 {
        self.bc(Block::Base)
            .range
            .clone()
            .map(|a| x[a] * self.f[i].d(a))
            .sum()
    }

    /// `ζ_B(ζ_B(f_i))` from the jets of `ζ_B`.
    pub fn zzf(&self, i: usize, zb: &[Jet2]) -> f64 {
        let r = self.bc(Block::Base).range.clone();
        let mut s = 0.0;
        for a in r.clone() {
            // ζ^a ∂_a (ζ^b ∂_b f)
            for b in r.clone() {
                s += zb[a].value()
                    * (zb[b].d(a) * self.f[i].d(b) + zb[b].value() * self.f[i].hess(a, b));
            }
        }
        s
    }

    /// `grad f_i` for the base metric, embedded in the product chart.
    pub fn grad_f(&self, i: usize) -> Vec<f64> {
        let base = self.bc(Block::Base);
        let df: Vec<f64> = base.range.clone().map(|a| self.f[i].d(a)).collect();
        self.embed(&base.geom.gradient(&df), Block::Base)
    }

    /// `g_B(grad f_i, grad f_i)`.
    pub fn grad_f_norm2(&self, i: usize) -> f64 {
        let g = self.grad_f(i);
        self.gb(Block::Base, &g, &g)
    }

    /// `P` restricted to the factor `b`, on that factor's chart.
    pub fn p_local(&self, b: Block) -> Vec<f64> {
        self.local(&self.p_vec, b)
    }

    /// Factor Lie matrix `L^b_{ζ_b} g_b`, or its semi-symmetric version when
    /// `ssm` is set (with `P` restricted to the factor).
    pub fn factor_lie(&self, z: &[Jet2], b: Block, ssm: bool) -> Mat {
        let zl = self.local_jets(z, b);
        let g = &self.bc(b).geom;
        if ssm {
            lie::ssm_lie_metric_matrix(g, &zl, &self.p_local(b))
        } else {
            lie::lie_metric_matrix(g, &zl)
        }
    }

    /// Largest entry of the factor Lie matrix: zero iff `ζ_b` is (ssm-)Killing on `b`.
    pub fn factor_killing(&self, z: &[Jet2], b: Block, ssm: bool) -> f64 {
        lie::max_abs(&self.factor_lie(z, b, ssm))
    }

    /// Largest entry of `L^b L^b g_b` on the factor.
    pub fn factor_two_killing(&self, z: &[Jet2], b: Block) -> f64 {
        lie::max_abs(&lie::lie_lie_metric_matrix(
            &self.bc(b).geom,
            &self.local_jets(z, b),
        ))
    }

    /// `g_b(∇^b_{X_b} ζ_b, X_b)`, semi-symmetric on the factor when `ssm` is set.
    pub fn factor_form(&self, z: &[Jet2], b: Block, ssm: bool, x: &[f64]) -> f64 {
        let zl = self.local_jets(z, b);
        let xl = self.local(x, b);
        let g = &self.bc(b).geom;
        if ssm {
            lie::ssm_killing_form(g, &zl, &self.p_local(b), &xl)
        } else {
            lie::killing_form(g, &zl, &xl)
        }
    }

    /// `g(∇̄_X ζ, X)` on the product.
    pub fn ssm_form(&self, z: &[Jet2], x: &[f64]) -> f64 {
        lie::ssm_killing_form(&self.geom, z, &self.p_vec, x)
    }

    /// `g(∇_X ζ, X)` on the product.
    pub fn lc_form(&self, z: &[Jet2], x: &[f64]) -> f64 {
        lie::killing_form(&self.geom, z, x)
    }

    /// Fitted homothety constant and residual of `ζ_b` on its factor at this point.
    pub fn factor_homothety(&self, z: &[Jet2], b: Block) -> (f64, f64) {
        let l = self.factor_lie(z, b, false);
        let g = &self.bc(b).geom;
        let n = g.n;
        let (mut num, mut den) = (0.0, 0.0);
        for a in 0..n {
            for c in 0..n {
                num += l[a][c] * g.g(a, c);
                den += g.g(a, c) * g.g(a, c);
            }
        }
        let c = if den > 0.0 { num / den } else { 0.0 };
        let mut r = 0.0f64;
        for a in 0..n {
            for e in 0..n {
                r = r.max((l[a][e] - c * g.g(a, e)).abs());
            }
        }
        (c, r)
    }
}

pub fn values(z: &[Jet2]) -> Vec<f64> {
    z.iter().map(Jet2::value).collect()
}
