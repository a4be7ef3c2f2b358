//! Block metrics, the multiply warped product structure
//! `g = g_B ⊕ f_1² g_1 ⊕ … ⊕ f_m² g_m`, and pointwise metric algebra.

use std::collections::BTreeMap;
use std::ops::Range;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::fieldexpr::{Block, ExprError, FieldExpr, Scalar, VectorFieldDef};
use crate::jets::{Jet2, JetError, Point, MAX_DIM};
use crate::sampling::Interval;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("warping function f_{fiber} = {value} is not positive")]
    NonPositiveWarping { fiber: usize, value: f64 },
    #[error("metric is singular (det = {det:e})")]
    SingularMetric { det: f64 },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("plane is degenerate (A^2 = {area2:e})")]
    DegeneratePlane { area2: f64 },
    #[error("cannot build an orthonormal frame: {0}")]
    FrameConstructionFailure(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
}

impl From<JetError> for GeomError {
    fn from(e: JetError) -> Self {
        GeomError::Expr(ExprError::Domain(e))
    }
}

/// Metric on one factor, in its own coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMetric {
    pub coords: Vec<String>,
    /// Full symmetric matrix of component expressions over `coords`.
    pub components: Vec<Vec<FieldExpr>>,
    pub signature: Vec<i8>,
    pub boxes: Vec<Interval>,
    /// Chart is the fundamental box of a periodic (compact) factor.
    pub periodic: bool,
}

impl BlockMetric {
    /// Builds a metric from `(i, j, expr)` entries; unspecified entries are zero.
    pub fn from_entries(
        coords: &[&str],
        entries: &[(usize, usize, &str)],
        constants: &BTreeMap<String, f64>,
        boxes: Vec<Interval>,
    ) -> Result<Self, GeomError> {
        let n = coords.len();
        let mut components = vec![vec![FieldExpr::constant(0.0, coords); n]; n];
        for &(i, j, src) in entries {
            if i >= n || j >= n {
                return Err(GeomError::Invalid(format!(
                    "metric entry ({}, {}) outside a {n}-dimensional block",
                    i + 1,
                    j + 1
                )));
            }
            let e = FieldExpr::parse_with(src, coords, constants)?;
            components[i][j] = e.clone();
            components[j][i] = e;
        }
        let mut m = Self {
            coords: coords.iter().map(|s| s.to_string()).collect(),
            components,
            signature: Vec::new(),
            boxes,
            periodic: false,
        };
        m.signature = m.signature_at_center()?;
        Ok(m)
    }

    /// Constant diagonal metric with the given signs.
    pub fn flat(coords: &[&str], signs: &[i8], boxes: Vec<Interval>) -> Self {
        let n = coords.len();
        let mut components = vec![vec![FieldExpr::constant(0.0, coords); n]; n];
        for (i, &s) in signs.iter().enumerate() {
            components[i][i] = FieldExpr::constant(s as f64, coords);
        }
        Self {
            coords: coords.iter().map(|s| s.to_string()).collect(),
            components,
            signature: signs.to_vec(),
            boxes,
            periodic: false,
        }
    }

    /// Unit round sphere `dθ² + sin²θ dφ²` on `(0, π) × (0, 2π)`.
    pub fn sphere2(theta: &str, phi: &str) -> Self {
        let coords = [theta, phi];
        let one = FieldExpr::constant(1.0, &coords);
        let zero = FieldExpr::constant(0.0, &coords);
        let s2 = FieldExpr::parse(&format!("sin({theta})^2"), &coords).expect("builtin sphere");
        Self {
            coords: coords.iter().map(|s| s.to_string()).collect(),
            components: vec![vec![one, zero.clone()], vec![zero, s2]],
            signature: vec![1, 1],
            boxes: vec![
                Interval::new(0.0, std::f64::consts::PI),
                Interval::new(0.0, 2.0 * std::f64::consts::PI),
            ],
            periodic: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    fn center(&self) -> Vec<f64> {
        self.boxes.iter().map(|b| 0.5 * (b.lo + b.hi)).collect()
    }

    fn signature_at_center(&self) -> Result<Vec<i8>, GeomError> {
        let m = self.components::<f64>(&self.center())?;
        Ok(signature_of(&to_matrix(&m)))
    }

    pub fn components<S: Scalar>(&self, x: &[S]) -> Result<Vec<Vec<S>>, GeomError> {
        let n = self.dim();
        let mut out = vec![vec![S::lift(0.0); n]; n];
        for i in 0..n {
            for j in i..n {
                let v = self.components[i][j].eval(x)?;
                out[i][j] = v;
                out[j][i] = v;
            }
        }
        Ok(out)
    }
}

/// Sorted eigenvalue signs of a symmetric matrix.
pub fn signature_of(m: &DMatrix<f64>) -> Vec<i8> {
    let eig = m.clone().symmetric_eigen();
    let mut s: Vec<i8> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l < 0.0 { -1 } else { 1 })
        .collect();
    s.sort();
    s
}

fn to_matrix<S: Scalar>(m: &[Vec<S>]) -> DMatrix<f64> {
    let n = m.len();
    DMatrix::from_fn(n, n, |i, j| m[i][j].real())
}

/// Anything that yields metric components in a single chart.
pub trait MetricSource {
    fn dim(&self) -> usize;
    fn metric_components<S: Scalar>(&self, x: &[S]) -> Result<Vec<Vec<S>>, GeomError>;
}

impl MetricSource for BlockMetric {
    fn dim(&self) -> usize {
        self.coords.len()
    }
    fn metric_components<S: Scalar>(&self, x: &[S]) -> Result<Vec<Vec<S>>, GeomError> {
        self.components(x)
    }
}

/// `B ×_{f_1} M_1 × … ×_{f_m} M_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductStructure {
    pub base: BlockMetric,
    pub fibers: Vec<BlockMetric>,
    /// Warping functions over base coordinates, one per fiber.
    pub warpings: Vec<FieldExpr>,
    offsets: Vec<usize>,
}

impl ProductStructure {
    pub fn new(
        base: BlockMetric,
        fibers: Vec<BlockMetric>,
        warpings: Vec<FieldExpr>,
    ) -> Result<Self, GeomError> {
        if fibers.len() != warpings.len() {
            return Err(GeomError::Invalid(format!(
                "{} fibers but {} warping functions",
                fibers.len(),
                warpings.len()
            )));
        }
        for w in &warpings {
            if w.vars() != base.coords.as_slice() {
                return Err(GeomError::Invalid(
                    "warping functions must be scoped to the base coordinates".into(),
                ));
            }
        }
        let mut offsets = vec![base.dim()];
        for f in &fibers {
            offsets.push(offsets.last().unwrap() + f.dim());
        }
        let total = *offsets.last().unwrap();
        if total > MAX_DIM {
            return Err(JetError::DimensionTooLarge(total).into());
        }
        Ok(Self {
            base,
            fibers,
            warpings,
            offsets,
        })
    }

    /// Number of fibers `m`.
    pub fn m(&self) -> usize {
        self.fibers.len()
    }

    pub fn total_dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn block_range(&self, block: Block) -> Range<usize> {
        match block {
            Block::Base => 0..self.base.dim(),
            Block::Fiber(i) => self.offsets[i]..self.offsets[i + 1],
            Block::Full => 0..self.total_dim(),
        }
    }

    pub fn block_metric(&self, block: Block) -> Option<&BlockMetric> {
        match block {
            Block::Base => Some(&self.base),
            Block::Fiber(i) => self.fibers.get(i),
            Block::Full => None,
        }
    }

    pub fn blocks(&self) -> Vec<Block> {
        std::iter::once(Block::Base)
            .chain((0..self.m()).map(Block::Fiber))
            .collect()
    }

    pub fn block_of(&self, coord: usize) -> Block {
        if coord < self.base.dim() {
            return Block::Base;
        }
        Block::Fiber(
            (0..self.m())
                .find(|&i| coord < self.offsets[i + 1])
                .unwrap(),
        )
    }

    pub fn coord_names(&self) -> Vec<String> {
        let mut names = self.base.coords.clone();
        for f in &self.fibers {
            names.extend(f.coords.iter().cloned());
        }
        names
    }

    pub fn boxes(&self) -> Vec<Interval> {
        let mut b = self.base.boxes.clone();
        for f in &self.fibers {
            b.extend(f.boxes.iter().copied());
        }
        b
    }

    /// Declared signature: base signs followed by fiber signs.
    pub fn signature(&self) -> Vec<i8> {
        let mut s = self.base.signature.clone();
        for f in &self.fibers {
            s.extend(f.signature.iter().copied());
        }
        s.sort();
        s
    }

    /// `f_i` evaluated on base coordinates.
    pub fn warping<S: Scalar>(&self, i: usize, x_base: &[S]) -> Result<S, GeomError> {
        let v = self.warpings[i].eval(x_base)?;
        if v.real() <= 0.0 {
            return Err(GeomError::NonPositiveWarping {
                fiber: i + 1,
                value: v.real(),
            });
        }
        Ok(v)
    }

    /// `f_i` as a jet over the full chart at `p`.
    pub fn warping_jet(&self, i: usize, p: &Point) -> Result<Jet2, GeomError> {
        let seeds = seeds(p)?;
        self.warping(i, &seeds[self.block_range(Block::Base)])
    }

    pub fn assemble(&self, p: &Point) -> Result<MetricAt, GeomError> {
        let comps = self.metric_components::<f64>(p.coords())?;
        MetricAt::new(to_matrix(&comps), p.clone())
    }
}

impl MetricSource for ProductStructure {
    fn dim(&self) -> usize {
        self.total_dim()
    }

    fn metric_components<S: Scalar>(&self, x: &[S]) -> Result<Vec<Vec<S>>, GeomError> {
        let n = self.total_dim();
        if x.len() != n {
            return Err(GeomError::DimensionMismatch {
                expected: n,
                found: x.len(),
            });
        }
        let mut out = vec![vec![S::lift(0.0); n]; n];
        let rb = self.block_range(Block::Base);
        let gb = self.base.components(&x[rb.clone()])?;
        for (a, row) in gb.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                out[a][b] = *v;
            }
        }
        for (i, fiber) in self.fibers.iter().enumerate() {
            let w = self.warping(i, &x[rb.clone()])?;
            let w2 = w * w;
            let r = self.block_range(Block::Fiber(i));
            let gi = fiber.components(&x[r.clone()])?;
            for (a, row) in gi.iter().enumerate() {
                for (b, v) in row.iter().enumerate() {
                    out[r.start + a][r.start + b] = w2 * *v;
                }
            }
        }
        Ok(out)
    }
}

/// Seed jets for every coordinate of `p`.
pub fn seeds(p: &Point) -> Result<Vec<Jet2>, JetError> {
    (0..p.chart_dim()).map(|k| Jet2::seed(p, k)).collect()
}

/// Metric matrix and inverse at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricAt {
    pub matrix: DMatrix<f64>,
    pub inverse: DMatrix<f64>,
    pub point: Point,
}

impl MetricAt {
    pub fn new(matrix: DMatrix<f64>, point: Point) -> Result<Self, GeomError> {
        let n = matrix.nrows();
        let scale = matrix.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        let lu = matrix.clone().lu();
        let det = lu.determinant();
        if det.abs() <= 1e-10 * scale.powi(n as i32) {
            return Err(GeomError::SingularMetric { det });
        }
        let inverse = lu.try_inverse().ok_or(GeomError::SingularMetric { det })?;
        Ok(Self {
            matrix,
            inverse,
            point,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> Result<f64, GeomError> {
        let n = self.dim();
        for v in [x, y] {
            if v.len() != n {
                return Err(GeomError::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        Ok(bilinear(&self.matrix, x, y))
    }

    /// `g(X, X)`, possibly negative.
    pub fn norm2(&self, x: &[f64]) -> Result<f64, GeomError> {
        self.inner(x, x)
    }

    /// Raises an index: `(g^{-1} w)^k`.
    pub fn raise(&self, w: &[f64]) -> Vec<f64> {
        mat_vec(&self.inverse, w)
    }

    pub fn lower(&self, v: &[f64]) -> Vec<f64> {
        mat_vec(&self.matrix, v)
    }
}

/// `xᵀ M y`, summed so that the result is symmetric in `x, y` for symmetric `M`.
pub fn bilinear(m: &DMatrix<f64>, x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        s += m[(i, i)] * (x[i] * y[i]);
        for j in (i + 1)..n {
            s += m[(i, j)] * (x[i] * y[j] + x[j] * y[i]);
        }
    }
    s
}

pub fn mat_vec(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (0..m.nrows())
        .map(|i| (0..v.len()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

/// Metric, its first and second derivatives, and Christoffel symbols with
/// their first derivatives, all at one point of one chart.
#[derive(Debug, Clone)]
pub struct LocalGeometry {
    pub n: usize,
    pub metric: MetricAt,
    /// `dg[k][a][b] = ∂_k g_ab`
    pub dg: Vec<Vec<Vec<f64>>>,
    /// `d2g[k][l][a][b] = ∂_k ∂_l g_ab`
    pub d2g: Vec<Vec<Vec<Vec<f64>>>>,
    /// `gamma[k][i][j] = Γ^k_ij`
    pub gamma: Vec<Vec<Vec<f64>>>,
    /// `dgamma[m][k][i][j] = ∂_m Γ^k_ij`
    pub dgamma: Vec<Vec<Vec<Vec<f64>>>>,
}

impl LocalGeometry {
    pub fn at<M: MetricSource>(source: &M, p: &Point) -> Result<Self, GeomError> {
        let n = source.dim();
        if p.chart_dim() != n {
            return Err(GeomError::DimensionMismatch {
                expected: n,
                found: p.chart_dim(),
            });
        }
        let jets = source.metric_components(&seeds(p)?)?;
        let metric = MetricAt::new(DMatrix::from_fn(n, n, |a, b| jets[a][b].value()), p.clone())?;
        let dg: Vec<Vec<Vec<f64>>> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|a| (0..n).map(|b| jets[a][b].d(k)).collect())
                    .collect()
            })
            .collect();
        let d2g: Vec<Vec<Vec<Vec<f64>>>> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|l| {
                        (0..n)
                            .map(|a| (0..n).map(|b| jets[a][b].hess(k, l)).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let gi = &metric.inverse;

        // C_lij = ∂_i g_jl + ∂_j g_il − ∂_l g_ij
        let c = |l: usize, i: usize, j: usize| dg[i][j][l] + dg[j][i][l] - dg[l][i][j];
        let dc = |m: usize, l: usize, i: usize, j: usize| {
            d2g[m][i][j][l] + d2g[m][j][i][l] - d2g[m][l][i][j]
        };
        let mut gamma = vec![vec![vec![0.0; n]; n]; n];
        for (k, gk) in gamma.iter_mut().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    gk[i][j] = 0.5 * (0..n).map(|l| gi[(k, l)] * c(l, i, j)).sum::<f64>();
                }
            }
        }
        // ∂_m g^{kl} = −g^{ka} ∂_m g_ab g^{bl}
        let dginv: Vec<DMatrix<f64>> = (0..n)
            .map(|m| {
                let dm = DMatrix::from_fn(n, n, |a, b| dg[m][a][b]);
                -(gi * dm * gi)
            })
            .collect();
        let mut dgamma = vec![vec![vec![vec![0.0; n]; n]; n]; n];
        for m in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        dgamma[m][k][i][j] = 0.5
                            * (0..n)
                                .map(|l| {
                                    dginv[m][(k, l)] * c(l, i, j) + gi[(k, l)] * dc(m, l, i, j)
                                })
                                .sum::<f64>();
                    }
                }
            }
        }
        Ok(Self {
            n,
            metric,
            dg,
            d2g,
            gamma,
            dgamma,
        })
    }

    pub fn g(&self, a: usize, b: usize) -> f64 {
        self.metric.matrix[(a, b)]
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        bilinear(&self.metric.matrix, x, y)
    }

    /// `(grad h)^k = g^{kl} ∂_l h`.
    pub fn gradient(&self, dh: &[f64]) -> Vec<f64> {
        self.metric.raise(dh)
    }
}

/// A vector field written as a sum of lifted parts.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct VectorField {
    pub parts: Vec<VectorFieldDef>,
}

impl VectorField {
    pub fn new(parts: Vec<VectorFieldDef>) -> Self {
        Self { parts }
    }

    pub fn single(part: VectorFieldDef) -> Self {
        Self { parts: vec![part] }
    }

    /// Parts lifted from `block`.
    pub fn restrict(&self, block: Block) -> VectorField {
        VectorField {
            parts: self
                .parts
                .iter()
                .filter(|p| p.block == block)
                .cloned()
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn plus(&self, other: &VectorField) -> VectorField {
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        VectorField { parts }
    }

    /// Whether every part is lifted from a single factor.
    pub fn is_lifted(&self) -> bool {
        self.parts.iter().all(|p| p.block != Block::Full)
    }

    /// Component jets on the chart of `ps` at `p`.
    pub fn jets(&self, ps: &ProductStructure, p: &Point) -> Result<Vec<Jet2>, GeomError> {
        let s = seeds(p)?;
        let mut out = vec![Jet2::constant(0.0); p.chart_dim()];
        for part in &self.parts {
            let r = ps.block_range(part.block);
            add_part(&mut out, part, &s[r.clone()], r.start)?;
        }
        Ok(out)
    }

    /// Component jets of the parts lifted from `block`, on that block's own chart.
    pub fn jets_on_block(&self, block: Block, p_block: &Point) -> Result<Vec<Jet2>, GeomError> {
        let s = seeds(p_block)?;
        let mut out = vec![Jet2::constant(0.0); p_block.chart_dim()];
        for part in self.parts.iter().filter(|p| p.block == block) {
            add_part(&mut out, part, &s, 0)?;
        }
        Ok(out)
    }

    pub fn values(&self, ps: &ProductStructure, p: &Point) -> Result<Vec<f64>, GeomError> {
        Ok(self.jets(ps, p)?.iter().map(Jet2::value).collect())
    }
}

fn add_part(
    out: &mut [Jet2],
    part: &VectorFieldDef,
    env: &[Jet2],
    offset: usize,
) -> Result<(), GeomError> {
    if part.dim() != env.len() {
        return Err(GeomError::DimensionMismatch {
            expected: env.len(),
            found: part.dim(),
        });
    }
    for (k, c) in part.components.iter().enumerate() {
        out[offset + k] = out[offset + k] + c.eval(env)?;
    }
    Ok(())
}

/// Divergence `∂_a V^a + Γ^a_ab V^b` computed in one chart.
pub fn divergence(geom: &LocalGeometry, v: &[Jet2]) -> f64 {
    let n = geom.n;
    let mut div = 0.0;
    for a in 0..n {
        div += v[a].d(a);
        for b in 0..n {
            div += geom.gamma[a][a][b] * v[b].value();
        }
    }
    div
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    fn consts(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn grw(warp: &str) -> ProductStructure {
        let base = BlockMetric::flat(&["t"], &[-1], vec![Interval::new(-1.0, 1.0)]);
        let fiber = BlockMetric::flat(&["x"], &[1], vec![Interval::new(-1.0, 1.0)]);
        let w = FieldExpr::parse(warp, &["t"]).unwrap();
        ProductStructure::new(base, vec![fiber], vec![w]).unwrap()
    }

    #[test]
    fn lorentzian_warped_metric_at_origin() {
        let m = grw("exp(t)").assemble(&pt(&[0.0, 0.3])).unwrap();
        assert_eq!(
            m.matrix,
            DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0])
        );
        assert_eq!(m.inner(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), -1.0);
        assert_eq!(m.inner(&[0.5, 2.0], &[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn unit_warping_is_direct_product() {
        let m = grw("1").assemble(&pt(&[0.7, -0.2])).unwrap();
        assert_eq!(
            m.matrix,
            DMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, 1.0])
        );
    }

    #[test]
    fn kasner_fiber_scaling() {
        let base = BlockMetric::flat(&["t"], &[-1], vec![Interval::new(1.0, 4.0)]);
        let fiber = BlockMetric::flat(&["x"], &[1], vec![Interval::new(0.0, 1.0)]);
        let w = FieldExpr::parse_with("t^p1", &["t"], &consts(&[("p1", 2.0)])).unwrap();
        let ps = ProductStructure::new(base, vec![fiber], vec![w]).unwrap();
        let m = ps.assemble(&pt(&[3.0, 0.5])).unwrap();
        assert_eq!(m.matrix[(1, 1)], 81.0);
        assert_eq!(m.matrix[(0, 1)], 0.0);
    }

    #[test]
    fn metric_jet_derivatives() {
        let geom = LocalGeometry::at(&grw("exp(t)"), &pt(&[0.0, 0.0])).unwrap();
        assert!((geom.dg[0][1][1] - 2.0).abs() < 1e-15);
        assert!((geom.d2g[0][0][1][1] - 4.0).abs() < 1e-15);
        let flat = LocalGeometry::at(&grw("1"), &pt(&[0.2, 0.1])).unwrap();
        assert!(flat.dg.iter().flatten().flatten().all(|v| *v == 0.0));
        assert!(flat
            .dgamma
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .all(|v| *v == 0.0));
    }

    #[test]
    fn inner_product_scaling() {
        let m = grw("exp(t)").assemble(&pt(&[1.0, 0.0])).unwrap();
        let e2 = (1.0f64).exp().powi(2);
        assert!((m.inner(&[0.0, 1.0], &[0.0, 1.0]).unwrap() - e2).abs() < 1e-12);
        assert!(m.inner(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn gradient_raises_with_signature() {
        let base = BlockMetric::flat(&["t"], &[1], vec![Interval::new(0.0, 1.0)]);
        let g = LocalGeometry::at(&base, &pt(&[0.5])).unwrap();
        assert_eq!(g.gradient(&[1.0]), vec![1.0]);
        let lor = BlockMetric::flat(&["t"], &[-1], vec![Interval::new(0.0, 1.0)]);
        let g = LocalGeometry::at(&lor, &pt(&[0.5])).unwrap();
        assert_eq!(g.gradient(&[1.0]), vec![-1.0]);
        assert_eq!(g.gradient(&[0.0]), vec![0.0]);
    }

    #[test]
    fn divergence_examples() {
        let plane = BlockMetric::flat(&["x", "y"], &[1, 1], vec![Interval::new(-1.0, 1.0); 2]);
        let p = pt(&[0.3, -0.4]);
        let geom = LocalGeometry::at(&plane, &p).unwrap();
        let field = |srcs: &[&str]| {
            VectorField::single(
                VectorFieldDef::parse(Block::Base, srcs, &["x", "y"], &BTreeMap::new()).unwrap(),
            )
            .jets_on_block(Block::Base, &p)
            .unwrap()
        };
        assert_eq!(divergence(&geom, &field(&["-y", "x"])), 0.0);
        assert_eq!(divergence(&geom, &field(&["x", "y"])), 2.0);
        let line = BlockMetric::flat(&["x"], &[1], vec![Interval::new(-1.0, 1.0)]);
        let q = pt(&[0.25]);
        let geom = LocalGeometry::at(&line, &q).unwrap();
        let v = VectorField::single(
            VectorFieldDef::parse(Block::Base, &["x"], &["x"], &BTreeMap::new()).unwrap(),
        )
        .jets_on_block(Block::Base, &q)
        .unwrap();
        assert_eq!(divergence(&geom, &v), 1.0);
    }

    #[test]
    fn sphere_divergence_uses_volume_factor() {
        // div(∂θ) on S² is cot θ.
        let s2 = BlockMetric::sphere2("th", "ph");
        let p = pt(&[0.9, 1.0]);
        let geom = LocalGeometry::at(&s2, &p).unwrap();
        let v = VectorField::single(
            VectorFieldDef::parse(Block::Base, &["1", "0"], &["th", "ph"], &BTreeMap::new())
                .unwrap(),
        )
        .jets_on_block(Block::Base, &p)
        .unwrap();
        assert!((divergence(&geom, &v) - 0.9f64.cos() / 0.9f64.sin()).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_warping_and_singular_metric() {
        let ps = grw("t");
        assert!(matches!(
            ps.assemble(&pt(&[-0.5, 0.0])),
            Err(GeomError::NonPositiveWarping { fiber: 1, .. })
        ));
        let degenerate = BlockMetric::from_entries(
            &["x", "y"],
            &[(0, 0, "1"), (0, 1, "1"), (1, 1, "1")],
            &BTreeMap::new(),
            vec![Interval::new(0.0, 1.0); 2],
        );
        assert!(
            matches!(degenerate, Err(GeomError::SingularMetric { .. })) || {
                let m = degenerate.unwrap();
                matches!(
                    LocalGeometry::at(&m, &pt(&[0.5, 0.5])),
                    Err(GeomError::SingularMetric { .. })
                )
            }
        );
    }

    #[test]
    fn assembled_signature_is_block_signature() {
        let ps = grw("2 + t");
        let m = ps.assemble(&pt(&[0.1, 0.2])).unwrap();
        assert_eq!(signature_of(&m.matrix), ps.signature());
    }
}
