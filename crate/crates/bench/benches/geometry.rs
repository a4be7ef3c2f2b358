use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use warpfield_bench::Fixture;
use warpfield_core::coordinate::metric_jets;
use warpfield_core::suite::{self, SuiteConfig};
use warpfield_core::{killing_residual, CurvatureAt, KillingKind, LocalGeometry};

const MANIFESTS: [&str; 3] = ["grw_exp", "mw2_fiber", "s3_hopf"];

fn geometry(c: &mut Criterion) {
    let mut group = c.benchmark_group("geometry");
    for name in MANIFESTS {
        let fx = Fixture::load(name, 1);
        let ps = &fx.manifest.structure;
        let p = &fx.points[0];
        group.bench_with_input(BenchmarkId::new("metric_jets", name), p, |b, p| {
            b.iter(|| metric_jets(ps, black_box(p)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("local_geometry", name), p, |b, p| {
            b.iter(|| LocalGeometry::at(ps, black_box(p)).unwrap())
        });
        let geom = LocalGeometry::at(ps, p).unwrap();
        group.bench_function(BenchmarkId::new("curvature", name), |b| {
            b.iter(|| CurvatureAt::from_geometry(black_box(&geom)))
        });
    }
    group.finish();
}

fn residuals(c: &mut Criterion) {
    let mut group = c.benchmark_group("killing_residual");
    for name in MANIFESTS {
        let fx = Fixture::load(name, 64);
        for kind in [KillingKind::Killing, KillingKind::TwoKilling] {
            group.bench_function(BenchmarkId::new(kind.name(), name), |b| {
                b.iter(|| {
                    killing_residual(&fx.manifest, "zeta", kind, black_box(&fx.points)).unwrap()
                })
            });
        }
    }
    group.finish();
}

fn registry(c: &mut Criterion) {
    let mut group = c.benchmark_group("registry");
    group.sample_size(10);
    let cfg = SuiteConfig::default();
    for name in MANIFESTS {
        let m = Fixture::load(name, 1).manifest;
        let cases = suite::all_cases(&m);
        group.bench_function(name, |b| b.iter(|| suite::run(&m, &cases, &cfg)));
    }
    group.finish();
}

criterion_group!(benches, geometry, residuals, registry);
criterion_main!(benches);
