//! Riemann and Ricci tensors, sectional curvature, orthonormal frames and
//! the trace `Tr g(∇ζ, ∇ζ)`.
//!
//! Conventions: `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]`,
//! `R(∂i,∂j)∂k = R^l_{kij} ∂l` and `R(X,Y,Z,W) = g(R(X,Y)Z, W)`.

use std::ops::Range;

use crate::jets::Jet2;
use crate::lie::{apply, nabla_zeta};
use crate::metric::{GeomError, LocalGeometry};

#[derive(Debug, Clone)]
pub struct CurvatureAt {
    pub n: usize,
    /// `riemann[l][k][i][j] = R^l_{kij}`
    pub riemann: Vec<Vec<Vec<Vec<f64>>>>,
    /// `lower[i][j][k][l] = R(∂i, ∂j, ∂k, ∂l)`
    pub lower: Vec<Vec<Vec<Vec<f64>>>>,
    /// `ricci[j][k] = R^i_{kij}`, the trace of `X ↦ R(X, ∂j)∂k`.
    pub ricci: Vec<Vec<f64>>,
}

impl CurvatureAt {
    pub fn from_geometry(geom: &LocalGeometry) -> Self {
        let n = geom.n;
        let g = &geom.gamma;
        let dg = &geom.dgamma;
        let mut riemann = vec![vec![vec![vec![0.0; n]; n]; n]; n];
        for l in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let mut v = dg[i][l][j][k] - dg[j][l][i][k];
                        for m in 0..n {
                            v += g[l][i][m] * g[m][j][k] - g[l][j][m] * g[m][i][k];
                        }
                        riemann[l][k][i][j] = v;
                    }
                }
            }
        }
        let mut lower = vec![vec![vec![vec![0.0; n]; n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        lower[i][j][k][l] =
                            (0..n).map(|p| geom.g(l, p) * riemann[p][k][i][j]).sum();
                    }
                }
            }
        }
        let ricci = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| (0..n).map(|i| riemann[i][k][i][j]).sum())
                    .collect()
            })
            .collect();
        Self {
            n,
            riemann,
            lower,
            ricci,
        }
    }

    /// `R(X, Y, Z, W)`.
    pub fn r4(&self, x: &[f64], y: &[f64], z: &[f64], w: &[f64]) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                if y[j] == 0.0 {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        s += self.lower[i][j][k][l] * x[i] * y[j] * z[k] * w[l];
                    }
                }
            }
        }
        s
    }

    pub fn ricci_form(&self, x: &[f64], y: &[f64]) -> f64 {
        let n = self.n;
        let mut s = 0.0;
        for j in 0..n {
            for k in 0..n {
                s += self.ricci[j][k] * x[j] * y[k];
            }
        }
        s
    }

    /// Largest violation of the pair symmetries and the first Bianchi identity.
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.n;
        let r = &self.lower;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = r[i][j][k][l];
                        let scale = 1.0f64.max(v.abs());
                        worst = worst
                            .max((v + r[j][i][k][l]).abs() / scale)
                            .max((v + r[i][j][l][k]).abs() / scale)
                            .max((v - r[k][l][i][j]).abs() / scale)
                            .max((v + r[j][k][i][l] + r[k][i][j][l]).abs() / scale);
                    }
                }
            }
        }
        worst
    }
}

/// `A²(ζ, X) = g(ζ,ζ) g(X,X) − g(ζ,X)²`.
pub fn area2(geom: &LocalGeometry, z: &[f64], x: &[f64]) -> f64 {
    let zx = geom.inner(z, x);
    geom.inner(z, z) * geom.inner(x, x) - zx * zx
}

/// `K(ζ, X) = −R(ζ, X, ζ, X) / A²(ζ, X)`.
pub fn sectional(
    geom: &LocalGeometry,
    curv: &CurvatureAt,
    z: &[f64],
    x: &[f64],
) -> Result<f64, GeomError> {
    let a2 = area2(geom, z, x);
    if a2.abs() <= 1e-10 {
        return Err(GeomError::DegeneratePlane { area2: a2 });
    }
    Ok(-curv.r4(z, x, z, x) / a2)
}

/// Pseudo-orthonormal frame `E_a` with signs `ε_a = g(E_a, E_a)`.
#[derive(Debug, Clone)]
pub struct Frame {
    pub vectors: Vec<Vec<f64>>,
    pub signs: Vec<f64>,
}

/// Gram–Schmidt on the coordinate vectors of each block range separately.
pub fn block_frame(geom: &LocalGeometry, blocks: &[Range<usize>]) -> Result<Frame, GeomError> {
    let n = geom.n;
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut signs = Vec::with_capacity(n);
    for r in blocks {
        let start = vectors.len();
        for c in r.clone() {
            let mut v = vec![0.0; n];
            v[c] = 1.0;
            for b in start..vectors.len() {
                let proj = signs[b] * geom.inner(&v, &vectors[b]);
                for (vi, ei) in v.iter_mut().zip(&vectors[b]) {
                    *vi -= proj * ei;
                }
            }
            let nn = geom.inner(&v, &v);
            if nn.abs() <= 1e-12 {
                return Err(GeomError::FrameConstructionFailure(format!(
                    "null vector at coordinate {c}"
                )));
            }
            let s = nn.abs().sqrt();
            vectors.push(v.iter().map(|x| x / s).collect());
            signs.push(nn.signum());
        }
    }
    if vectors.len() != n {
        return Err(GeomError::FrameConstructionFailure(
            "blocks do not cover the chart".into(),
        ));
    }
    Ok(Frame { vectors, signs })
}

/// `Σ_a ε_a g(∇_{E_a} ζ, ∇_{E_a} ζ)` over a block frame.
pub fn trace_nabla_zeta(
    geom: &LocalGeometry,
    z: &[Jet2],
    blocks: &[Range<usize>],
) -> Result<f64, GeomError> {
    let frame = block_frame(geom, blocks)?;
    let a = nabla_zeta(geom, z);
    Ok(frame
        .vectors
        .iter()
        .zip(&frame.signs)
        .map(|(e, s)| {
            let v = apply(&a, e);
            s * geom.inner(&v, &v)
        })
        .sum())
}

/// Frame-free form `g^{ab} g_kl A^k_a A^l_b` of the same trace.
pub fn trace_nabla_zeta_coordinate(geom: &LocalGeometry, z: &[Jet2]) -> f64 {
    let n = geom.n;
    let a = nabla_zeta(geom, z);
    let gi = &geom.metric.inverse;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if gi[(i, j)] == 0.0 {
                continue;
            }
            let ai: Vec<f64> = (0..n).map(|k| a[k][i]).collect();
            let aj: Vec<f64> = (0..n).map(|k| a[k][j]).collect();
            s += gi[(i, j)] * geom.inner(&ai, &aj);
        }
    }
    s
}

/// `max_a |∇_{e_a} ζ|_∞` over coordinate directions.
pub fn parallel_residual_at(geom: &LocalGeometry, z: &[Jet2]) -> f64 {
    nabla_zeta(geom, z)
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(v.abs()))
}

#[cfg(test)]
#[allow(clippy::single_range_in_vec_init)]
mod tests {
    use super::*;
    use crate::fieldexpr::{Block, VectorFieldDef};
    use crate::jets::Point;
    use crate::metric::{BlockMetric, VectorField};
    use crate::sampling::Interval;
    use std::collections::BTreeMap;

    fn field(srcs: &[&str], coords: &[&str], p: &Point) -> Vec<Jet2> {
        VectorField::single(
            VectorFieldDef::parse(Block::Base, srcs, coords, &BTreeMap::new()).unwrap(),
        )
        .jets_on_block(Block::Base, p)
        .unwrap()
    }

    #[test]
    fn sphere_curvature() {
        let s2 = BlockMetric::sphere2("th", "ph");
        for k in 0..16 {
            let th = 0.35 + 0.15 * k as f64;
            let geom = LocalGeometry::at(&s2, &Point::new(vec![th, 2.0]).unwrap()).unwrap();
            let c = CurvatureAt::from_geometry(&geom);
            let s2t = th.sin().powi(2);
            assert!((c.lower[0][1][1][0] - s2t).abs() < 1e-12);
            assert!((c.lower[0][1][0][1] + s2t).abs() < 1e-12);
            let k = sectional(&geom, &c, &[1.0, 0.0], &[0.0, 1.0]).unwrap();
            assert!((k - 1.0).abs() < 1e-12);
            assert!((c.ricci_form(&[1.0, 0.0], &[1.0, 0.0]) - 1.0).abs() < 1e-12);
            assert!(c.symmetry_residual() < 1e-12);
        }
    }

    #[test]
    fn flat_and_one_dimensional_are_flat() {
        let plane = BlockMetric::flat(&["x", "y"], &[1, 1], vec![Interval::new(0.0, 1.0); 2]);
        let geom = LocalGeometry::at(&plane, &Point::new(vec![0.5, 0.5]).unwrap()).unwrap();
        let c = CurvatureAt::from_geometry(&geom);
        assert!(c
            .lower
            .iter()
            .flatten()
            .flatten()
            .flatten()
            .all(|v| *v == 0.0));
        assert_eq!(sectional(&geom, &c, &[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
        assert!(matches!(
            sectional(&geom, &c, &[1.0, 1.0], &[2.0, 2.0]),
            Err(GeomError::DegeneratePlane { .. })
        ));
        let line = BlockMetric::flat(&["t"], &[1], vec![Interval::new(0.0, 1.0)]);
        let geom = LocalGeometry::at(&line, &Point::new(vec![0.5]).unwrap()).unwrap();
        assert_eq!(CurvatureAt::from_geometry(&geom).lower[0][0][0][0], 0.0);
    }

    #[test]
    fn hyperbolic_plane_has_negative_curvature() {
        let h = BlockMetric::from_entries(
            &["r", "x"],
            &[(0, 0, "1"), (1, 1, "exp(2*r)")],
            &BTreeMap::new(),
            vec![Interval::new(-1.0, 1.0); 2],
        )
        .unwrap();
        let geom = LocalGeometry::at(&h, &Point::new(vec![0.3, 0.1]).unwrap()).unwrap();
        let c = CurvatureAt::from_geometry(&geom);
        let k = sectional(&geom, &c, &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!((k + 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_examples() {
        let line = BlockMetric::flat(&["t"], &[1], vec![Interval::new(0.0, 3.0)]);
        let p = Point::new(vec![1.4]).unwrap();
        let geom = LocalGeometry::at(&line, &p).unwrap();
        let tdt = field(&["t"], &["t"], &p);
        assert_eq!(trace_nabla_zeta(&geom, &tdt, &[0..1]).unwrap(), 1.0);
        let c = field(&["3"], &["t"], &p);
        assert_eq!(trace_nabla_zeta(&geom, &c, &[0..1]).unwrap(), 0.0);
        assert_eq!(parallel_residual_at(&geom, &c), 0.0);

        let s2 = BlockMetric::sphere2("th", "ph");
        let p = Point::new(vec![0.8, 1.0]).unwrap();
        let geom = LocalGeometry::at(&s2, &p).unwrap();
        let z = field(&["sin(ph)", "th * ph"], &["th", "ph"], &p);
        let framed = trace_nabla_zeta(&geom, &z, &[0..2]).unwrap();
        assert!((framed - trace_nabla_zeta_coordinate(&geom, &z)).abs() < 1e-12);
    }
}
