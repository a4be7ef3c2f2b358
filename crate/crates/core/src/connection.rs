//! Levi-Civita and semi-symmetric metric connections at a point.

use std::fmt;

use crate::fieldexpr::Block;
use crate::jets::{Jet2, Point};
use crate::metric::{GeomError, LocalGeometry, ProductStructure, VectorField};

/// Where the torsion vector field `P` lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorsionLocation {
    Zero,
    Base,
    /// Fiber index, zero-based.
    Fiber(usize),
}

impl fmt::Display for TorsionLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorsionLocation::Zero => write!(f, "zero"),
            TorsionLocation::Base => write!(f, "base"),
            TorsionLocation::Fiber(r) => write!(f, "fiber.{}", r + 1),
        }
    }
}

/// The vector field `P` defining `π(X) = g(X, P)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionSpec {
    pub location: TorsionLocation,
    pub field: VectorField,
}

impl TorsionSpec {
    pub fn zero() -> Self {
        Self {
            location: TorsionLocation::Zero,
            field: VectorField::default(),
        }
    }

    pub fn new(location: TorsionLocation, field: VectorField) -> Result<Self, GeomError> {
        let expected = match location {
            TorsionLocation::Zero => {
                return if field.is_zero() {
                    Ok(Self::zero())
                } else {
                    Err(GeomError::Invalid(
                        "torsion location is zero but P is given".into(),
                    ))
                }
            }
            TorsionLocation::Base => Block::Base,
            TorsionLocation::Fiber(r) => Block::Fiber(r),
        };
        if field.parts.iter().any(|p| p.block != expected) {
            return Err(GeomError::Invalid(format!(
                "P must be lifted from {expected}"
            )));
        }
        Ok(Self { location, field })
    }

    pub fn is_zero(&self) -> bool {
        self.location == TorsionLocation::Zero
    }

    /// Components of `P` at `p`.
    pub fn values(&self, ps: &ProductStructure, p: &Point) -> Result<Vec<f64>, GeomError> {
        if self.is_zero() {
            return Ok(vec![0.0; p.chart_dim()]);
        }
        self.field.values(ps, p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConnectionKind {
    LeviCivita,
    SemiSymmetricMetric,
}

/// Connection coefficients `Γ^k_ij` (so that `∇_{∂i} ∂j = Γ^k_ij ∂k`) at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionAt {
    pub kind: ConnectionKind,
    pub gamma: Vec<Vec<Vec<f64>>>,
    pub point: Point,
}

pub fn christoffel(geom: &LocalGeometry) -> ConnectionAt {
    ConnectionAt {
        kind: ConnectionKind::LeviCivita,
        gamma: geom.gamma.clone(),
        point: geom.metric.point.clone(),
    }
}

/// `Γ̄^k_ij = Γ^k_ij + δ^k_i π_j − g_ij P^k` with `π_j = g_jl P^l`.
pub fn semi_symmetric(geom: &LocalGeometry, p_vec: &[f64]) -> ConnectionAt {
    let n = geom.n;
    let pi = geom.metric.lower(p_vec);
    let mut gamma = geom.gamma.clone();
    for (k, gk) in gamma.iter_mut().enumerate() {
        for (i, row) in gk.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                if k == i {
                    *v += pi[j];
                }
                *v -= geom.g(i, j) * p_vec[k];
            }
        }
    }
    debug_assert_eq!(gamma.len(), n);
    ConnectionAt {
        kind: ConnectionKind::SemiSymmetricMetric,
        gamma,
        point: geom.metric.point.clone(),
    }
}

impl ConnectionAt {
    pub fn dim(&self) -> usize {
        self.gamma.len()
    }

    /// `(∇_X Z)^k = X^i ∂_i Z^k + Γ^k_ij X^i Z^j` for a jet-valued field `Z`.
    pub fn nabla(&self, x: &[f64], z: &[Jet2]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut s = 0.0;
                for i in 0..n {
                    s += x[i] * z[k].d(i);
                    for j in 0..n {
                        s += self.gamma[k][i][j] * x[i] * z[j].value();
                    }
                }
                s
            })
            .collect()
    }

    /// Covariant derivative of a constant-coefficient field `Z`.
    pub fn nabla_const(&self, x: &[f64], z: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut s = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        s += self.gamma[k][i][j] * x[i] * z[j];
                    }
                }
                s
            })
            .collect()
    }

    /// `T(X, Y)` for constant-coefficient `X, Y` (the bracket vanishes).
    pub fn torsion(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let a = self.nabla_const(x, y);
        let b = self.nabla_const(y, x);
        a.iter().zip(&b).map(|(u, v)| u - v).collect()
    }
}

/// `|X(g(Y,Z)) − g(∇_X Y, Z) − g(Y, ∇_X Z)|` for constant-coefficient `Y, Z`.
pub fn metric_compatibility_residual(
    geom: &LocalGeometry,
    conn: &ConnectionAt,
    x: &[f64],
    y: &[f64],
    z: &[f64],
) -> f64 {
    let n = geom.n;
    let mut xg = 0.0;
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                xg += x[k] * geom.dg[k][a][b] * y[a] * z[b];
            }
        }
    }
    let ny = conn.nabla_const(x, y);
    let nz = conn.nabla_const(x, z);
    (xg - geom.inner(&ny, z) - geom.inner(y, &nz)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::BlockMetric;
    use crate::sampling::Interval;

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn flat_space_has_no_christoffels() {
        let m = BlockMetric::flat(
            &["x", "y", "z"],
            &[1, 1, 1],
            vec![Interval::new(0.0, 1.0); 3],
        );
        let geom = LocalGeometry::at(&m, &pt(&[0.1, 0.2, 0.3])).unwrap();
        assert!(geom.gamma.iter().flatten().flatten().all(|v| *v == 0.0));
    }

    #[test]
    fn sphere_christoffels() {
        let s2 = BlockMetric::sphere2("th", "ph");
        for k in 0..16 {
            let th = 0.2 + 0.17 * k as f64;
            let geom = LocalGeometry::at(&s2, &pt(&[th, 1.0])).unwrap();
            assert!((geom.gamma[0][1][1] + th.sin() * th.cos()).abs() < 1e-13);
            assert!((geom.gamma[1][0][1] - th.cos() / th.sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn semi_symmetric_on_flat_plane() {
        let m = BlockMetric::flat(&["x", "y"], &[1, 1], vec![Interval::new(0.0, 1.0); 2]);
        let geom = LocalGeometry::at(&m, &pt(&[0.5, 0.5])).unwrap();
        let bar = semi_symmetric(&geom, &[1.0, 0.0]);
        // Γ̄^y_{yx} = δ^y_y π_x = 1, Γ̄^x_{yy} = −g_yy P^x = −1.
        assert_eq!(bar.gamma[1][1][0], 1.0);
        assert_eq!(bar.gamma[0][1][1], -1.0);
        // T(∂x, ∂y) = π(∂y)∂x − π(∂x)∂y = −∂y.
        assert_eq!(bar.torsion(&[1.0, 0.0], &[0.0, 1.0]), vec![0.0, -1.0]);
        assert_eq!(bar.torsion(&[0.3, 0.7], &[0.3, 0.7]), vec![0.0, 0.0]);
        let lc = semi_symmetric(&geom, &[0.0, 0.0]);
        assert_eq!(lc.gamma, geom.gamma);
    }

    #[test]
    fn compatibility_detects_corruption() {
        let s2 = BlockMetric::sphere2("th", "ph");
        let geom = LocalGeometry::at(&s2, &pt(&[1.1, 0.4])).unwrap();
        let bar = semi_symmetric(&geom, &[0.3, -0.8]);
        let (x, y, z) = ([1.0, 0.2], [1.0, -0.5], [0.7, 0.3]);
        assert!(metric_compatibility_residual(&geom, &bar, &x, &y, &z) < 1e-12);
        let mut bad = bar.clone();
        bad.gamma[1][0][1] += 0.1;
        assert!(metric_compatibility_residual(&geom, &bad, &x, &y, &z) > 1e-3);
    }
}
