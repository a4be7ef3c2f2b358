//! The bundled example manifests, embedded at build time.

use crate::manifest::{Manifest, ManifestError};

/// `(name, source)` for every bundled manifest, sorted by name.
pub const CORPUS: &[(&str, &str)] = &[
    ("grw_exp", include_str!("../../../../corpus/grw_exp.wm")),
    ("grw_poly", include_str!("../../../../corpus/grw_poly.wm")),
    (
        "hyperbolic",
        include_str!("../../../../corpus/hyperbolic.wm"),
    ),
    ("interval", include_str!("../../../../corpus/interval.wm")),
    (
        "interval_lorentz",
        include_str!("../../../../corpus/interval_lorentz.wm"),
    ),
    ("kasner", include_str!("../../../../corpus/kasner.wm")),
    ("kasner_a2", include_str!("../../../../corpus/kasner_a2.wm")),
    (
        "kasner_perturbed",
        include_str!("../../../../corpus/kasner_perturbed.wm"),
    ),
    (
        "kasner_phi2",
        include_str!("../../../../corpus/kasner_phi2.wm"),
    ),
    ("mw2_base", include_str!("../../../../corpus/mw2_base.wm")),
    (
        "mw2_base_gap",
        include_str!("../../../../corpus/mw2_base_gap.wm"),
    ),
    ("mw2_fiber", include_str!("../../../../corpus/mw2_fiber.wm")),
    ("mw3_zero", include_str!("../../../../corpus/mw3_zero.wm")),
    ("mw_twok", include_str!("../../../../corpus/mw_twok.wm")),
    ("plane_rot", include_str!("../../../../corpus/plane_rot.wm")),
    ("prop615", include_str!("../../../../corpus/prop615.wm")),
    (
        "prop615_bad",
        include_str!("../../../../corpus/prop615_bad.wm"),
    ),
    (
        "prop615_dil",
        include_str!("../../../../corpus/prop615_dil.wm"),
    ),
    ("s3_hopf", include_str!("../../../../corpus/s3_hopf.wm")),
    ("sphere", include_str!("../../../../corpus/sphere.wm")),
    ("static", include_str!("../../../../corpus/static.wm")),
    ("torus", include_str!("../../../../corpus/torus.wm")),
    (
        "torus_warped",
        include_str!("../../../../corpus/torus_warped.wm"),
    ),
    ("twok_1_0", include_str!("../../../../corpus/twok_1_0.wm")),
    ("twok_2_1", include_str!("../../../../corpus/twok_2_1.wm")),
    ("twok_m1_3", include_str!("../../../../corpus/twok_m1_3.wm")),
    (
        "warped_sphere",
        include_str!("../../../../corpus/warped_sphere.wm"),
    ),
    ("wp_fiber", include_str!("../../../../corpus/wp_fiber.wm")),
];

pub fn source(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Parses every bundled manifest.
pub fn load_all() -> Result<Vec<Manifest>, ManifestError> {
    CORPUS.iter().map(|(n, s)| Manifest::parse(n, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_manifest_parses_and_samples() {
        let all = load_all().unwrap();
        assert_eq!(all.len(), CORPUS.len());
        for m in &all {
            let pts = m.sample_points(&mut crate::sampling::SplitMix64::new(1), 64);
            assert_eq!(pts.len(), 64, "{}", m.name);
            assert!(!m.fields.is_empty(), "{}", m.name);
        }
    }
}
