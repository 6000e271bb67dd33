//! Campaign throughput: the rayon worker pool against the sequential
//! driver on identical workloads. Run with `cargo bench -p chiforge-core`.

use chiforge_core::campaign::{extremal_scan, run_campaign, run_trial, CampaignSpec};
use chiforge_core::gen::{self, rng_for};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn bench_campaign(c: &mut Criterion) {
    // Light per-trial work: pool overhead dominates, so this group usually
    // favors the sequential path.
    let mut group = c.benchmark_group("campaign/gyarfas_vertex");
    group.sample_size(10);
    for (name, workers) in [("sequential", Some(1)), ("parallel", None)] {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let spec = CampaignSpec::new("gyarfas_vertex", 24, 7)
                    .with_mode(chiforge_core::lemmas::Mode::Relaxed);
                let spec = CampaignSpec { workers, ..spec };
                let report = run_campaign(&spec).unwrap();
                assert_eq!(report.pass, 24);
                report.pass
            })
        });
    }
    group.finish();

    // Heavy per-trial work (the full trichotomy chain, ~10ms/trial): the
    // worker pool should approach a linear speedup here.
    let mut group = c.benchmark_group("campaign/main_trichotomy");
    group.sample_size(10);
    for (name, workers) in [("sequential", Some(1)), ("parallel", None)] {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let spec = CampaignSpec::new("main_trichotomy", 8, 7)
                    .with_mode(chiforge_core::lemmas::Mode::Relaxed);
                let spec = CampaignSpec { workers, ..spec };
                run_campaign(&spec).unwrap().pass
            })
        });
    }
    group.finish();
}

fn bench_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("scan/chi_vs_omega");
    group.sample_size(10);
    for (name, workers) in [("sequential", Some(1)), ("parallel", None)] {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let report = extremal_scan(3, 64, 10, 0.35, 30, workers).unwrap();
                report.rows.len()
            })
        });
    }
    group.finish();
}

fn bench_trial_parts(c: &mut Criterion) {
    let mut group = c.benchmark_group("trial");
    group.sample_size(20);
    group.bench_function("main_trichotomy_single", |b| {
        let spec = CampaignSpec::new("main_trichotomy", 1, 5);
        b.iter(|| run_trial(&spec, 0).verified)
    });
    group.bench_function("detector_n14", |b| {
        let mut rng = rng_for(11, 0);
        let g = gen::gnp(14, 0.4, &mut rng);
        b.iter(|| g.find_induced_p5().is_some())
    });
    group.finish();
}

criterion_group!(benches, bench_campaign, bench_scan, bench_trial_parts);
criterion_main!(benches);
