//! Order-2 forward-mode differentiation over chart coordinates.
//!
//! A [`Jet2`] carries a value together with its gradient and (symmetric)
//! Hessian with respect to the chart coordinates at one point. Every tensor
//! quantity downstream (metric derivatives, Christoffel symbols and their
//! derivatives, curvature, second Lie derivatives) is built from jet
//! arithmetic, so the derivative rules here are the root of trust for the
//! whole crate. [`fd_oracle`] provides an independent finite-difference
//! estimate used to check them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Largest chart dimension supported by the fixed-size jet storage.
pub const MAX_DIM: usize = 6;

const PACKED_LEN: usize = MAX_DIM * (MAX_DIM + 1) / 2;

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{func} is not differentiable at {arg}")]
    Domain { func: &'static str, arg: f64 },
    #[error("coordinate index {index} out of range for chart dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("chart dimension {0} exceeds the supported maximum of {MAX_DIM}")]
    DimensionTooLarge(usize),
    #[error("non-finite coordinate {value} at index {index}")]
    NonFinite { index: usize, value: f64 },
}

#[inline]
fn packed(i: usize, j: usize) -> usize {
    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
    hi * (hi + 1) / 2 + lo
}

/// Evaluation locus: coordinates of a point in one chart.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self, JetError> {
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(JetError::NonFinite { index, value });
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn chart_dim(&self) -> usize {
        self.coords.len()
    }

    /// Sub-point made of the coordinates in `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Point {
        Point {
            coords: self.coords[range].to_vec(),
        }
    }

    pub fn with_coord(&self, k: usize, value: f64) -> Point {
        let mut coords = self.coords.clone();
        coords[k] = value;
        Point { coords }
    }
}

/// Value, gradient and Hessian of a scalar at a point.
///
/// The Hessian is stored as a packed upper triangle so it is symmetric by
/// construction. Entries beyond `dim` are always zero, which lets jets of
/// different dimension (constants have dimension 0) mix freely.
#[derive(Clone, Copy, PartialEq)]
pub struct Jet2 {
    dim: usize,
    value: f64,
    grad: [f64; MAX_DIM],
    hess: [f64; PACKED_LEN],
}

impl fmt::Debug for Jet2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet2")
            .field("value", &self.value)
            .field("grad", &self.grad())
            .field("hess", &self.hess_matrix())
            .finish()
    }
}

impl Jet2 {
    pub fn constant(value: f64) -> Self {
        Self {
            dim: 0,
            value,
            grad: [0.0; MAX_DIM],
            hess: [0.0; PACKED_LEN],
        }
    }

    /// The k-th coordinate function at `p`: value `x_k`, gradient `e_k`, zero Hessian.
    pub fn seed(p: &Point, k: usize) -> Result<Self, JetError> {
        let dim = p.chart_dim();
        if dim > MAX_DIM {
            return Err(JetError::DimensionTooLarge(dim));
        }
        if k >= dim {
            return Err(JetError::IndexOutOfRange { index: k, dim });
        }
        let mut jet = Self::constant(p.coords[k]);
        jet.dim = dim;
        jet.grad[k] = 1.0;
        Ok(jet)
    }

    /// Builds a jet from explicit parts. `hess` must be symmetric; only the
    /// upper triangle is read.
    pub fn from_parts(value: f64, grad: &[f64], hess: &[Vec<f64>]) -> Result<Self, JetError> {
        let dim = grad.len();
        if dim > MAX_DIM {
            return Err(JetError::DimensionTooLarge(dim));
        }
        let mut jet = Self::constant(value);
        jet.dim = dim;
        jet.grad[..dim].copy_from_slice(grad);
        for j in 0..dim {
            for i in 0..=j {
                jet.hess[packed(i, j)] = hess[i][j];
            }
        }
        Ok(jet)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn grad(&self) -> &[f64] {
        &self.grad[..self.dim]
    }

    /// Partial derivative along coordinate `i` (zero beyond `dim`).
    pub fn d(&self, i: usize) -> f64 {
        self.grad[i]
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.hess[packed(i, j)]
    }

    pub fn hess_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.hess(i, j)).collect())
            .collect()
    }

    /// First-order jet of `∂_c self`: value `∂_c`, gradient the `c`-th Hessian
    /// row. The Hessian of the result would need third derivatives and is left zero.
    pub fn partial(&self, c: usize) -> Self {
        let mut out = Self::constant(self.grad[c]);
        out.dim = self.dim;
        for i in 0..self.dim {
            out.grad[i] = self.hess(c, i);
        }
        out
    }

    /// The jet seen from the coordinates in `r` only; derivatives along the
    /// other coordinates are dropped.
    pub fn restrict(&self, r: std::ops::Range<usize>) -> Self {
        let mut out = Self::constant(self.value);
        out.dim = r.len();
        for (a, i) in r.clone().enumerate() {
            out.grad[a] = self.grad[i];
            for (b, j) in r.clone().enumerate().skip(a) {
                out.hess[packed(a, b)] = self.hess(i, j);
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.grad.iter().all(|v| v.is_finite())
            && self.hess.iter().all(|v| v.is_finite())
    }

    #[inline]
    fn joint_dim(&self, other: &Self) -> usize {
        self.dim.max(other.dim)
    }

    /// Second-order chain rule for `h(a)` given `h(a)`, `h'(a)`, `h''(a)`.
    fn chain(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let n = self.dim;
        let mut out = Self::constant(f0);
        out.dim = n;
        for i in 0..n {
            out.grad[i] = f1 * self.grad[i];
        }
        for j in 0..n {
            for i in 0..=j {
                let k = packed(i, j);
                out.hess[k] = f2 * self.grad[i] * self.grad[j] + f1 * self.hess[k];
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.value *= s;
        out.grad.iter_mut().for_each(|g| *g *= s);
        out.hess.iter_mut().for_each(|h| *h *= s);
        out
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, JetError> {
        let b = rhs.value;
        if b.abs() <= f64::MIN_POSITIVE {
            return Err(JetError::DivisionByZero);
        }
        let n = self.joint_dim(rhs);
        let q = self.value / b;
        let mut out = Self::constant(q);
        out.dim = n;
        for i in 0..n {
            out.grad[i] = (self.grad[i] - q * rhs.grad[i]) / b;
        }
        for j in 0..n {
            for i in 0..=j {
                let k = packed(i, j);
                out.hess[k] = (self.hess[k]
                    - q * rhs.hess[k]
                    - out.grad[i] * rhs.grad[j]
                    - rhs.grad[i] * out.grad[j])
                    / b;
            }
        }
        Ok(out)
    }

    /// Integer power by repeated multiplication (exact on polynomials).
    pub fn powi(&self, n: i32) -> Result<Self, JetError> {
        if n == 0 {
            return Ok(Self::constant(1.0));
        }
        let mut acc = *self;
        for _ in 1..n.unsigned_abs() {
            acc = acc * *self;
        }
        if n < 0 {
            Self::constant(1.0).checked_div(&acc)
        } else {
            Ok(acc)
        }
    }

    /// `self^exponent` lowered to `exp(exponent * ln(self))`.
    pub fn powf(&self, exponent: &Self) -> Result<Self, JetError> {
        if self.value <= 0.0 {
            return Err(JetError::Domain {
                func: "pow",
                arg: self.value,
            });
        }
        Ok((*exponent * self.ln()?).exp())
    }

    // LLVM fuses sin and cos of one argument into sincos, whose results can
    // differ in the last bit from plain sin or cos. Hiding the argument of the
    // derivative-only call keeps the value identical to real evaluation.
    pub fn sin(&self) -> Self {
        let s = self.value.sin();
        let c = std::hint::black_box(self.value).cos();
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Self {
        let c = self.value.cos();
        let s = std::hint::black_box(self.value).sin();
        self.chain(c, -s, -c)
    }

    pub fn exp(&self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    pub fn ln(&self) -> Result<Self, JetError> {
        let a = self.value;
        if a <= 0.0 {
            return Err(JetError::Domain {
                func: "log",
                arg: a,
            });
        }
        Ok(self.chain(a.ln(), 1.0 / a, -1.0 / (a * a)))
    }

    pub fn sqrt(&self) -> Result<Self, JetError> {
        let a = self.value;
        if a <= 0.0 {
            return Err(JetError::Domain {
                func: "sqrt",
                arg: a,
            });
        }
        let s = a.sqrt();
        Ok(self.chain(s, 0.5 / s, -0.25 / (s * a)))
    }

    pub fn tanh(&self) -> Self {
        let t = self.value.tanh();
        let sech2 = 1.0 - t * t;
        self.chain(t, sech2, -2.0 * t * sech2)
    }

    /// Real-branch cube root; the derivative is singular at zero.
    pub fn cbrt(&self) -> Result<Self, JetError> {
        let a = self.value;
        if a == 0.0 {
            return Err(JetError::Domain {
                func: "cbrt",
                arg: a,
            });
        }
        let c = a.cbrt();
        let c2 = c * c;
        Ok(self.chain(c, 1.0 / (3.0 * c2), -2.0 / (9.0 * c2 * c2 * c)))
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        let mut out = self;
        out.dim = self.joint_dim(&rhs);
        out.value += rhs.value;
        for (a, b) in out.grad.iter_mut().zip(rhs.grad.iter()) {
            *a += b;
        }
        for (a, b) in out.hess.iter_mut().zip(rhs.hess.iter()) {
            *a += b;
        }
        out
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        let mut out = self;
        out.dim = self.joint_dim(&rhs);
        out.value -= rhs.value;
        for (a, b) in out.grad.iter_mut().zip(rhs.grad.iter()) {
            *a -= b;
        }
        for (a, b) in out.hess.iter_mut().zip(rhs.hess.iter()) {
            *a -= b;
        }
        out
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        let mut out = self;
        out.value = -out.value;
        out.grad.iter_mut().for_each(|g| *g = -*g);
        out.hess.iter_mut().for_each(|h| *h = -*h);
        out
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        let n = self.joint_dim(&rhs);
        let (a, b) = (self.value, rhs.value);
        let mut out = Jet2::constant(a * b);
        out.dim = n;
        for i in 0..n {
            out.grad[i] = self.grad[i] * b + a * rhs.grad[i];
        }
        for j in 0..n {
            for i in 0..=j {
                let k = packed(i, j);
                out.hess[k] = self.hess[k] * b
                    + a * rhs.hess[k]
                    + self.grad[i] * rhs.grad[j]
                    + self.grad[j] * rhs.grad[i];
            }
        }
        out
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: f64) -> Jet2 {
        self.scale(rhs)
    }
}

/// Central-difference estimate of value, gradient and Hessian of `f` at `p`.
///
/// Gradient: `(f(x+h e_i) - f(x-h e_i)) / 2h`. Diagonal Hessian uses the
/// three-point stencil, off-diagonal the four-point cross stencil.
pub fn fd_oracle<F, E>(f: F, p: &Point, step: f64) -> Result<Jet2, E>
where
    F: Fn(&Point) -> Result<f64, E>,
    E: From<JetError>,
{
    let n = p.chart_dim();
    if n > MAX_DIM {
        return Err(JetError::DimensionTooLarge(n).into());
    }
    let h = step;
    let x = p.coords();
    let shifted = |pairs: &[(usize, f64)]| -> Result<f64, E> {
        let mut c = x.to_vec();
        for &(k, d) in pairs {
            c[k] += d;
        }
        f(&Point::new(c)?)
    };
    let f0 = f(p)?;
    let mut grad = vec![0.0; n];
    let mut hess = vec![vec![0.0; n]; n];
    for i in 0..n {
        let fp = shifted(&[(i, h)])?;
        let fm = shifted(&[(i, -h)])?;
        grad[i] = (fp - fm) / (2.0 * h);
        hess[i][i] = (fp - 2.0 * f0 + fm) / (h * h);
        for j in 0..i {
            let fpp = shifted(&[(i, h), (j, h)])?;
            let fpm = shifted(&[(i, h), (j, -h)])?;
            let fmp = shifted(&[(i, -h), (j, h)])?;
            let fmm = shifted(&[(i, -h), (j, -h)])?;
            let v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }
    Ok(Jet2::from_parts(f0, &grad, &hess)?)
}
