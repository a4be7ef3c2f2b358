//! Direct coordinate formulas used as independent oracles.
//!
//! Everything here works from metric jets and field jets only; no
//! Christoffel symbols are involved. The Lie derivative of a symmetric
//! 2-tensor `h` along `ζ` in coordinates is
//! `(L_ζ h)_ab = ζ^c ∂_c h_ab + h_cb ∂_a ζ^c + h_ac ∂_b ζ^c`.

use crate::jets::{Jet2, Point};
use crate::metric::{seeds, GeomError, MetricSource};

/// Metric components as jets over the chart of `source`.
pub fn metric_jets<M: MetricSource>(source: &M, p: &Point) -> Result<Vec<Vec<Jet2>>, GeomError> {
    source.metric_components(&seeds(p)?)
}

/// `[X, Y]^k = X^i ∂_i Y^k − Y^i ∂_i X^k`.
pub fn bracket(x: &[Jet2], y: &[Jet2]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            (0..n)
                .map(|i| x[i].value() * y[k].d(i) - y[i].value() * x[k].d(i))
                .sum()
        })
        .collect()
}

fn constant_field(v: &[f64]) -> Vec<Jet2> {
    v.iter().map(|&c| Jet2::constant(c)).collect()
}

fn pairing(g: &[Vec<Jet2>], x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0.0;
    for a in 0..n {
        for b in 0..n {
            s += g[a][b].value() * x[a] * y[b];
        }
    }
    s
}

/// `(L_ζ g)(X, Y) = ζ(g(X,Y)) − g([ζ,X], Y) − g(X, [ζ,Y])` with `X, Y`
/// extended as constant-coefficient fields.
pub fn lie_metric_direct(g: &[Vec<Jet2>], z: &[Jet2], x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut zg = 0.0;
    for c in 0..n {
        for a in 0..n {
            for b in 0..n {
                zg += z[c].value() * g[a][b].d(c) * x[a] * y[b];
            }
        }
    }
    let zx = bracket(z, &constant_field(x));
    let zy = bracket(z, &constant_field(y));
    zg - pairing(g, &zx, y) - pairing(g, x, &zy)
}

/// `L_ζ h` for a symmetric tensor given as jets; the result carries exact
/// values and gradients (its Hessian is not meaningful).
pub fn lie_tensor(h: &[Vec<Jet2>], z: &[Jet2]) -> Vec<Vec<Jet2>> {
    let n = z.len();
    let mut out = vec![vec![Jet2::constant(0.0); n]; n];
    for a in 0..n {
        for b in a..n {
            let mut s = Jet2::constant(0.0);
            for c in 0..n {
                s = s
                    + z[c] * h[a][b].partial(c)
                    + h[c][b] * z[c].partial(a)
                    + h[a][c] * z[c].partial(b);
            }
            out[a][b] = s;
            out[b][a] = s;
        }
    }
    out
}

/// `(L_ζ L_ζ g)_ab` from nested coordinate Lie derivatives.
pub fn lie_lie_metric_direct(g: &[Vec<Jet2>], z: &[Jet2]) -> Vec<Vec<f64>> {
    let h = lie_tensor(g, z);
    let hh = lie_tensor(&h, z);
    hh.iter()
        .map(|row| row.iter().map(Jet2::value).collect())
        .collect()
}

/// Jacobian `∂_i ζ^k` as `[k][i]`.
pub fn jacobian(z: &[Jet2]) -> Vec<Vec<f64>> {
    let n = z.len();
    (0..n)
        .map(|k| (0..n).map(|i| z[k].d(i)).collect())
        .collect()
}
