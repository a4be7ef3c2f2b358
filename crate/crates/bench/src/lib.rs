//! Fixtures shared by the benchmarks.

use warpfield_core::suite::corpus;
use warpfield_core::{Manifest, Point, SplitMix64};

/// A bundled manifest together with sample points drawn from its box.
pub struct Fixture {
    pub manifest: Manifest,
    pub points: Vec<Point>,
}

impl Fixture {
    /// Panics if `name` is not a bundled manifest.
    pub fn load(name: &str, samples: usize) -> Self {
        let src = corpus::source(name).unwrap_or_else(|| panic!("no bundled manifest `{name}`"));
        let manifest = Manifest::parse(name, src).expect("bundled manifests parse");
        let points = manifest.sample_points(&mut SplitMix64::fork(24181, name), samples);
        Fixture { manifest, points }
    }
}
