//! Lie derivatives of the metric through the connection, Killing-type
//! residuals, and homothety fitting.

use crate::coordinate::jacobian;
use crate::jets::Jet2;
use crate::metric::LocalGeometry;

pub type Mat = Vec<Vec<f64>>;

fn zeros(n: usize) -> Mat {
    vec![vec![0.0; n]; n]
}

pub fn apply(m: &Mat, v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn column(m: &Mat, i: usize) -> Vec<f64> {
    m.iter().map(|row| row[i]).collect()
}

/// `A^k_i = (∇_{∂i} ζ)^k = ∂_i ζ^k + Γ^k_ij ζ^j`.
pub fn nabla_zeta(geom: &LocalGeometry, z: &[Jet2]) -> Mat {
    let n = geom.n;
    let mut a = zeros(n);
    for (k, row) in a.iter_mut().enumerate() {
        for (i, v) in row.iter_mut().enumerate() {
            *v = z[k].d(i);
            for j in 0..n {
                *v += geom.gamma[k][i][j] * z[j].value();
            }
        }
    }
    a
}

/// `Ā^k_i = A^k_i + π(ζ) δ^k_i − g(∂_i, ζ) P^k`, the semi-symmetric version.
pub fn nabla_bar_zeta(geom: &LocalGeometry, z: &[Jet2], p_vec: &[f64]) -> Mat {
    let zv: Vec<f64> = z.iter().map(Jet2::value).collect();
    let pi_zeta = geom.inner(&zv, p_vec);
    let gz = geom.metric.lower(&zv);
    let mut a = nabla_zeta(geom, z);
    for (k, row) in a.iter_mut().enumerate() {
        for (i, v) in row.iter_mut().enumerate() {
            if k == i {
                *v += pi_zeta;
            }
            *v -= gz[i] * p_vec[k];
        }
    }
    a
}

/// `(X, Y) ↦ g(A X, Y) + g(A Y, X)` as a matrix in the coordinate basis.
fn symmetrized(geom: &LocalGeometry, a: &Mat) -> Mat {
    let n = geom.n;
    let mut out = zeros(n);
    for i in 0..n {
        let ai = column(a, i);
        for j in 0..n {
            let aj = column(a, j);
            let mut s = 0.0;
            for k in 0..n {
                s += geom.g(k, j) * ai[k] + geom.g(k, i) * aj[k];
            }
            out[i][j] = s;
        }
    }
    out
}

/// `(L_ζ g)_ij` through `g(∇_X ζ, Y) + g(∇_Y ζ, X)`.
pub fn lie_metric_matrix(geom: &LocalGeometry, z: &[Jet2]) -> Mat {
    symmetrized(geom, &nabla_zeta(geom, z))
}

/// `(L̄_ζ g)_ij` through `g(∇̄_X ζ, Y) + g(∇̄_Y ζ, X)`.
pub fn ssm_lie_metric_matrix(geom: &LocalGeometry, z: &[Jet2], p_vec: &[f64]) -> Mat {
    symmetrized(geom, &nabla_bar_zeta(geom, z, p_vec))
}

pub fn form(m: &Mat, x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += m[i][j] * x[i] * y[j];
        }
    }
    s
}

pub fn lie_metric(geom: &LocalGeometry, z: &[Jet2], x: &[f64], y: &[f64]) -> f64 {
    let a = nabla_zeta(geom, z);
    geom.inner(&apply(&a, x), y) + geom.inner(&apply(&a, y), x)
}

pub fn ssm_lie_metric(
    geom: &LocalGeometry,
    z: &[Jet2],
    p_vec: &[f64],
    x: &[f64],
    y: &[f64],
) -> f64 {
    let a = nabla_bar_zeta(geom, z, p_vec);
    geom.inner(&apply(&a, x), y) + geom.inner(&apply(&a, y), x)
}

/// `g(∇_X ζ, X)`.
pub fn killing_form(geom: &LocalGeometry, z: &[Jet2], x: &[f64]) -> f64 {
    geom.inner(&apply(&nabla_zeta(geom, z), x), x)
}

/// `g(∇̄_X ζ, X)`.
pub fn ssm_killing_form(geom: &LocalGeometry, z: &[Jet2], p_vec: &[f64], x: &[f64]) -> f64 {
    geom.inner(&apply(&nabla_bar_zeta(geom, z, p_vec), x), x)
}

/// `B^k_{mi} = ∂_m A^k_i = ∂_m∂_i ζ^k + ∂_mΓ^k_ij ζ^j + Γ^k_ij ∂_m ζ^j`.
fn d_nabla_zeta(geom: &LocalGeometry, z: &[Jet2]) -> Vec<Mat> {
    let n = geom.n;
    let mut b = vec![zeros(n); n];
    for (k, bk) in b.iter_mut().enumerate() {
        for (m, row) in bk.iter_mut().enumerate() {
            for (i, v) in row.iter_mut().enumerate() {
                *v = z[k].hess(m, i);
                for j in 0..n {
                    *v += geom.dgamma[m][k][i][j] * z[j].value() + geom.gamma[k][i][j] * z[j].d(m);
                }
            }
        }
    }
    b
}

/// `(L_ζ L_ζ g)_ij` through
/// `g(∇_ζ∇_Xζ − ∇_{[ζ,X]}ζ, Y) + g(X, ∇_ζ∇_Yζ − ∇_{[ζ,Y]}ζ) + 2 g(∇_Xζ, ∇_Yζ)`
/// with `X, Y` extended as coordinate fields.
pub fn lie_lie_metric_matrix(geom: &LocalGeometry, z: &[Jet2]) -> Mat {
    let n = geom.n;
    let zv: Vec<f64> = z.iter().map(Jet2::value).collect();
    let a = nabla_zeta(geom, z);
    let b = d_nabla_zeta(geom, z);
    let jac = jacobian(z);
    // S^k_i: ∇_ζ∇_{∂i}ζ − ∇_{[ζ,∂i]}ζ, where [ζ,∂i] = −∂_i ζ.
    let mut s = zeros(n);
    for k in 0..n {
        for i in 0..n {
            let mut v = 0.0;
            for m in 0..n {
                v += zv[m] * b[k][m][i];
                for j in 0..n {
                    v += geom.gamma[k][m][j] * zv[m] * a[j][i];
                }
                v += a[k][m] * jac[m][i];
            }
            s[k][i] = v;
        }
    }
    let mut out = zeros(n);
    for i in 0..n {
        let si = column(&s, i);
        let ai = column(&a, i);
        for j in 0..n {
            let sj = column(&s, j);
            let aj = column(&a, j);
            let mut v = 0.0;
            for k in 0..n {
                v += geom.g(k, j) * si[k] + geom.g(i, k) * sj[k];
            }
            v += 2.0 * geom.inner(&ai, &aj);
            out[i][j] = v;
        }
    }
    out
}

/// `∇_ζ ζ`.
pub fn nabla_zeta_zeta(geom: &LocalGeometry, z: &[Jet2]) -> Vec<f64> {
    let zv: Vec<f64> = z.iter().map(Jet2::value).collect();
    apply(&nabla_zeta(geom, z), &zv)
}

/// `∇_X ∇_ζ ζ`.
pub fn nabla_x_nabla_zeta_zeta(geom: &LocalGeometry, z: &[Jet2], x: &[f64]) -> Vec<f64> {
    let n = geom.n;
    let zv: Vec<f64> = z.iter().map(Jet2::value).collect();
    let a = nabla_zeta(geom, z);
    let b = d_nabla_zeta(geom, z);
    let v = apply(&a, &zv);
    (0..n)
        .map(|k| {
            let mut s = 0.0;
            for m in 0..n {
                // ∂_m V^k = ∂_m ζ^i A^k_i + ζ^i B^k_{mi}
                let mut dv = 0.0;
                for i in 0..n {
                    dv += z[i].d(m) * a[k][i] + zv[i] * b[k][m][i];
                }
                s += x[m] * dv;
                for j in 0..n {
                    s += geom.gamma[k][m][j] * x[m] * v[j];
                }
            }
            s
        })
        .collect()
}

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Outcome of fitting `L_ζ g ≈ c g` over a set of samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Homothety {
    Homothetic { c: f64, residual: f64 },
    NotHomothetic { residual: f64, spread: f64 },
}

/// Least-squares fit of one scalar `c` with `(L_ζ g)_ab = c g_ab` over all
/// samples. `samples` holds `(L_ζ g, g)` matrix pairs.
pub fn fit_homothety(samples: &[(Mat, Mat)], tol: f64) -> Homothety {
    let (mut num, mut den) = (0.0, 0.0);
    let mut per_point = Vec::with_capacity(samples.len());
    for (l, g) in samples {
        let (mut pn, mut pd) = (0.0, 0.0);
        for (lr, gr) in l.iter().zip(g) {
            for (lv, gv) in lr.iter().zip(gr) {
                pn += lv * gv;
                pd += gv * gv;
            }
        }
        num += pn;
        den += pd;
        if pd > 0.0 {
            per_point.push(pn / pd);
        }
    }
    let c = if den > 0.0 { num / den } else { 0.0 };
    let residual = samples
        .iter()
        .flat_map(|(l, g)| {
            l.iter()
                .flatten()
                .zip(g.iter().flatten())
                .map(move |(lv, gv)| (lv - c * gv).abs())
        })
        .fold(0.0f64, f64::max);
    let mean = per_point.iter().sum::<f64>() / per_point.len().max(1) as f64;
    let spread = (per_point.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
        / per_point.len().max(1) as f64)
        .sqrt();
    if residual <= tol && spread <= 1e-6 {
        Homothety::Homothetic { c, residual }
    } else {
        Homothety::NotHomothetic { residual, spread }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coordinate::{lie_lie_metric_direct, lie_metric_direct, metric_jets};
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

    fn line() -> BlockMetric {
        BlockMetric::flat(&["t"], &[1], vec![Interval::new(0.0, 3.0)])
    }

    #[test]
    fn interval_examples() {
        let p = Point::new(vec![1.7]).unwrap();
        let geom = LocalGeometry::at(&line(), &p).unwrap();
        let a = field(&["-2"], &["t"], &p);
        assert_eq!(lie_metric(&geom, &a, &[1.0], &[1.0]), 0.0);
        let t = field(&["t"], &["t"], &p);
        assert_eq!(lie_metric(&geom, &t, &[1.0], &[1.0]), 2.0);
        // Example 3.12 regime: g(∇̄_X ζ, X) = 0 for ζ = a∂t, P = ∂t.
        assert_eq!(ssm_killing_form(&geom, &a, &[1.0], &[0.6]), 0.0);
    }

    #[test]
    fn rotation_is_killing_not_parallel() {
        let plane = BlockMetric::flat(&["x", "y"], &[1, 1], vec![Interval::new(-1.0, 1.0); 2]);
        let p = Point::new(vec![0.3, 0.5]).unwrap();
        let geom = LocalGeometry::at(&plane, &p).unwrap();
        let rot = field(&["-y", "x"], &["x", "y"], &p);
        assert_eq!(max_abs(&lie_metric_matrix(&geom, &rot)), 0.0);
        assert_eq!(max_abs(&lie_lie_metric_matrix(&geom, &rot)), 0.0);
        assert_eq!(max_abs(&nabla_zeta(&geom, &rot)), 1.0);
    }

    #[test]
    fn two_killing_on_interval() {
        for t in [0.7, 1.0, 2.2] {
            let p = Point::new(vec![t]).unwrap();
            let geom = LocalGeometry::at(&line(), &p).unwrap();
            let cb = field(&["cbrt(2*t - 1)"], &["t"], &Point::new(vec![t]).unwrap());
            assert!(max_abs(&lie_lie_metric_matrix(&geom, &cb)) < 1e-12);
            let sq = field(&["t^2"], &["t"], &p);
            let ll = lie_lie_metric_matrix(&geom, &sq);
            assert!((ll[0][0] - 20.0 * t * t).abs() < 1e-12);
        }
    }

    #[test]
    fn eq21_matches_nested_direct_formula_on_sphere() {
        let s2 = BlockMetric::sphere2("th", "ph");
        let p = Point::new(vec![1.2, 0.7]).unwrap();
        let geom = LocalGeometry::at(&s2, &p).unwrap();
        let g = metric_jets(&s2, &p).unwrap();
        let z = field(&["sin(ph) * th", "th^2 + cos(ph)"], &["th", "ph"], &p);
        let via_conn = lie_lie_metric_matrix(&geom, &z);
        let direct = lie_lie_metric_direct(&g, &z);
        for i in 0..2 {
            for j in 0..2 {
                assert!((via_conn[i][j] - direct[i][j]).abs() < 1e-11);
            }
        }
        let x = [0.3, -1.1];
        let y = [0.8, 0.25];
        assert!((lie_metric(&geom, &z, &x, &y) - lie_metric_direct(&g, &z, &x, &y)).abs() < 1e-12);
    }

    #[test]
    fn homothety_fits() {
        let plane = BlockMetric::flat(&["x", "y"], &[1, 1], vec![Interval::new(-1.0, 1.0); 2]);
        let collect = |srcs: &[&str]| -> Vec<(Mat, Mat)> {
            [[0.1, 0.2], [0.5, -0.3], [-0.4, 0.6]]
                .iter()
                .map(|c| {
                    let p = Point::new(c.to_vec()).unwrap();
                    let geom = LocalGeometry::at(&plane, &p).unwrap();
                    let z = field(srcs, &["x", "y"], &p);
                    let g = (0..2)
                        .map(|i| (0..2).map(|j| geom.g(i, j)).collect())
                        .collect();
                    (lie_metric_matrix(&geom, &z), g)
                })
                .collect()
        };
        assert_eq!(
            fit_homothety(&collect(&["x", "y"]), 1e-8),
            Homothety::Homothetic {
                c: 2.0,
                residual: 0.0
            }
        );
        assert!(matches!(
            fit_homothety(&collect(&["-y", "x"]), 1e-8),
            Homothety::Homothetic { c, .. } if c == 0.0
        ));
        assert!(matches!(
            fit_homothety(&collect(&["x^2", "0"]), 1e-8),
            Homothety::NotHomothetic { .. }
        ));
    }
}
