//! Reproducible sampling: the SplitMix64 generator, chart boxes with
//! exclusion zones, and the tolerance set shared by every check.
//!
//! The generator is written out rather than pulled from a crate because its
//! exact output sequence is part of the report contract: another
//! implementation given the same seed must draw the same points.

use serde::Serialize;

/// SplitMix64.
///
/// ```text
/// state += 0x9E3779B97F4A7C15
/// z = state
/// z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
/// z = (z ^ (z >> 27)) * 0x94D049BB133111EB
/// return z ^ (z >> 31)
/// ```
///
/// Uniform reals are `(next >> 11) * 2^-53` in `[0, 1)`.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Independent stream derived from this seed and a label.
    pub fn fork(seed: u64, label: &str) -> Self {
        // FNV-1a over the label, mixed into the seed.
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in label.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01B3);
        }
        let mut g = Self::new(seed ^ h);
        g.next_u64();
        g
    }
}

/// Tolerances for the three residual classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Jet-versus-jet algebraic identities and Killing residuals.
    pub alg: f64,
    /// Second-order (2-Killing) residuals and Lie decompositions.
    pub two_killing: f64,
    /// Comparisons against finite differences and the trace formula.
    pub fd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            alg: 1e-8,
            two_killing: 1e-7,
            fd: 1e-6,
        }
    }
}

/// Fraction of each box side trimmed from both ends before sampling.
pub const INSET: f64 = 0.1;

/// Open interval `(lo, hi)` for one coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn inset(&self) -> Interval {
        let w = (self.hi - self.lo) * INSET;
        Interval::new(self.lo + w, self.hi - w)
    }
}

/// Excluded coordinate band.
#[derive(Debug, Clone, PartialEq)]
pub struct ExclusionZone {
    pub coord: usize,
    pub interval: Interval,
}

/// Maximum draws per accepted point before a box is declared unusable.
const MAX_REJECTIONS: usize = 10_000;

/// Draws a point uniformly from the inset box, rejecting exclusion zones.
pub fn sample_point(
    rng: &mut SplitMix64,
    boxes: &[Interval],
    exclude: &[ExclusionZone],
) -> Option<Vec<f64>> {
    let inner: Vec<Interval> = boxes.iter().map(Interval::inset).collect();
    for _ in 0..MAX_REJECTIONS {
        let p: Vec<f64> = inner.iter().map(|iv| rng.range(iv.lo, iv.hi)).collect();
        if !exclude.iter().any(|z| z.interval.contains(p[z.coord])) {
            return Some(p);
        }
    }
    None
}
