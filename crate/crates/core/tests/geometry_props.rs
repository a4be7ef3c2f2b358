//! Invariants of the assembled geometry and of the Killing residuals over
//! the bundled corpus.

#![allow(clippy::needless_range_loop)]

use std::sync::OnceLock;

use proptest::prelude::*;
use warpfield_core::coordinate::metric_jets;
use warpfield_core::curvature::CurvatureAt;
use warpfield_core::jets::{fd_oracle, DEFAULT_FD_STEP};
use warpfield_core::lie::{self, nabla_zeta_zeta};
use warpfield_core::metric::{signature_of, GeomError};
use warpfield_core::suite::corpus;
use warpfield_core::{killing_residual, KillingKind, LocalGeometry, Manifest, Point, SplitMix64};

fn manifests() -> &'static [Manifest] {
    static ALL: OnceLock<Vec<Manifest>> = OnceLock::new();
    ALL.get_or_init(|| corpus::load_all().unwrap())
}

fn pick(idx: usize, seed: u64) -> (&'static Manifest, Point) {
    let all = manifests();
    let m = &all[idx % all.len()];
    let p = m.sample_points(&mut SplitMix64::new(seed), 1).remove(0);
    (m, p)
}

fn rand_vec(rng: &mut SplitMix64, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.range(-1.0, 1.0)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn assembled_metric_is_block_diagonal(idx in 0usize..64, seed in any::<u64>()) {
        let (m, p) = pick(idx, seed);
        let ps = &m.structure;
        let g = ps.assemble(&p).unwrap().matrix;
        for a in 0..ps.total_dim() {
            for b in 0..ps.total_dim() {
                if ps.block_of(a) != ps.block_of(b) {
                    prop_assert_eq!(g[(a, b)], 0.0);
                }
                prop_assert_eq!(g[(a, b)].to_bits(), g[(b, a)].to_bits());
            }
        }
    }

    #[test]
    fn signature_is_the_block_signature(idx in 0usize..64, seed in any::<u64>()) {
        let (m, p) = pick(idx, seed);
        let g = m.structure.assemble(&p).unwrap().matrix;
        let mut got = signature_of(&g);
        let mut want = m.structure.signature();
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn inner_product_is_symmetric(idx in 0usize..64, seed in any::<u64>()) {
        let (m, p) = pick(idx, seed);
        let g = m.structure.assemble(&p).unwrap();
        let mut rng = SplitMix64::new(seed ^ 0x5eed);
        let (x, y) = (rand_vec(&mut rng, g.dim()), rand_vec(&mut rng, g.dim()));
        prop_assert_eq!(g.inner(&x, &y).unwrap(), g.inner(&y, &x).unwrap());
    }

    #[test]
    fn metric_jets_match_finite_differences(idx in 0usize..64, seed in any::<u64>()) {
        let (m, p) = pick(idx, seed);
        let ps = &m.structure;
        let jets = metric_jets(ps, &p).unwrap();
        let n = ps.total_dim();
        for a in 0..n {
            for b in a..n {
                let fd = fd_oracle::<_, GeomError>(
                    |q| Ok(ps.assemble(q)?.matrix[(a, b)]),
                    &p,
                    DEFAULT_FD_STEP,
                )
                .unwrap();
                let j = &jets[a][b];
                for k in 0..n {
                    let d = (j.d(k) - fd.d(k)).abs();
                    prop_assert!(d <= 1e-6 * (1.0 + j.d(k).abs()), "{} g{a}{b},{k}: {d}", m.name);
                    for l in 0..n {
                        let h = (j.hess(k, l) - fd.hess(k, l)).abs();
                        prop_assert!(h <= 1e-4 * (1.0 + j.hess(k, l).abs()), "{} g{a}{b},{k}{l}: {h}", m.name);
                    }
                }
            }
        }
    }

    #[test]
    fn lie_derivatives_are_symmetric(idx in 0usize..64, seed in any::<u64>()) {
        let (m, p) = pick(idx, seed);
        let ps = &m.structure;
        let geom = LocalGeometry::at(ps, &p).unwrap();
        let pv = m.torsion.values(ps, &p).unwrap();
        for (_, f) in &m.fields {
            let z = f.jets(ps, &p).unwrap();
            for mat in [lie::lie_metric_matrix(&geom, &z), lie::ssm_lie_metric_matrix(&geom, &z, &pv)] {
                for a in 0..geom.n {
                    for b in 0..geom.n {
                        prop_assert!((mat[a][b] - mat[b][a]).abs() <= 1e-12 * (1.0 + mat[a][b].abs()));
                    }
                }
            }
        }
    }

    #[test]
    fn curvature_has_its_symmetries(idx in 0usize..64, seed in any::<u64>()) {
        let (m, p) = pick(idx, seed);
        let geom = LocalGeometry::at(&m.structure, &p).unwrap();
        let r = CurvatureAt::from_geometry(&geom).symmetry_residual();
        prop_assert!(r <= 1e-8, "{}: {r}", m.name);
    }
}

fn points(m: &Manifest) -> Vec<Point> {
    m.sample_points(&mut SplitMix64::fork(24181, &m.name), 64)
}

#[test]
fn killing_fields_are_two_killing() {
    let mut seen = 0;
    for m in manifests() {
        let pts = points(m);
        for name in m.field_names() {
            let k = killing_residual(m, name, KillingKind::Killing, &pts).unwrap();
            if k.max_abs > 1e-8 {
                continue;
            }
            seen += 1;
            let t = killing_residual(m, name, KillingKind::TwoKilling, &pts).unwrap();
            assert!(t.max_abs <= 1e-7, "{}/{name}: {}", m.name, t.max_abs);
        }
    }
    assert!(seen >= 10, "only {seen} Killing fields in the corpus");
}

#[test]
fn killing_and_ssm_killing_agree_without_torsion() {
    let mut seen = 0;
    for m in manifests().iter().filter(|m| m.torsion.is_zero()) {
        let pts = points(m);
        for name in m.field_names() {
            let k = killing_residual(m, name, KillingKind::Killing, &pts).unwrap();
            let s = killing_residual(m, name, KillingKind::SsmKilling, &pts).unwrap();
            assert_eq!(k.max_abs <= 1e-8, s.max_abs <= 1e-8, "{}/{name}", m.name);
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn constant_length_killing_fields_are_geodesic() {
    let mut seen = 0;
    for m in manifests() {
        let ps = &m.structure;
        let pts = points(m);
        for name in m.field_names() {
            let k = killing_residual(m, name, KillingKind::Killing, &pts).unwrap();
            if k.max_abs > 1e-8 {
                continue;
            }
            let f = m.field(name).unwrap();
            let mut lengths = Vec::new();
            let mut worst = 0.0f64;
            for p in &pts {
                let geom = LocalGeometry::at(ps, p).unwrap();
                let z = f.jets(ps, p).unwrap();
                let v = f.values(ps, p).unwrap();
                lengths.push(geom.inner(&v, &v));
                worst = nabla_zeta_zeta(&geom, &z)
                    .iter()
                    .fold(worst, |w, x| w.max(x.abs()));
            }
            let mean = lengths.iter().sum::<f64>() / lengths.len() as f64;
            let var =
                lengths.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / lengths.len() as f64;
            if var.sqrt() > 1e-8 {
                continue;
            }
            seen += 1;
            assert!(worst <= 1e-7, "{}/{name}: {worst}", m.name);
        }
    }
    assert!(seen >= 3, "only {seen} constant-length Killing fields");
}
