//! Sequential versus rayon execution of the three parallel hot paths.
//! Build with `--no-default-features` to see the fallback on both arms.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use wcs_qrng::pipeline::{generate, Target};
use wcs_qrng::randtests::{run_battery, BatteryConfig};
use wcs_qrng::sim::run_tally;
use wcs_qrng::sweep::{sweep, SweepSpec};
use wcs_qrng::{Executor, SimConfig, SourceModel};

const EXECUTORS: [(&str, Executor); 2] = [
    ("sequential", Executor::Sequential),
    ("parallel", Executor::Parallel),
];

fn bench_simulation(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_tally");
    let gates = 1u64 << 18;
    group.throughput(Throughput::Elements(gates));
    group.sample_size(10);
    for source in [SourceModel::single(), SourceModel::indistinguishable()] {
        let cfg = SimConfig::new(7, gates, 2.1, source);
        for (name, exec) in EXECUTORS {
            group.bench_with_input(BenchmarkId::new(name, source), &cfg, |b, cfg| {
                b.iter(|| run_tally(black_box(cfg), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    let spec = SweepSpec::default();
    group.throughput(Throughput::Elements(
        (spec.points * spec.sources.len()) as u64,
    ));
    for (name, exec) in EXECUTORS {
        group.bench_function(name, |b| b.iter(|| sweep(black_box(&spec), exec).unwrap()));
    }
    group.finish();
}

fn bench_battery(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_battery");
    group.sample_size(10);
    let cfg = SimConfig::new(3, 1, 2.1, SourceModel::indistinguishable());
    let bits = generate(&cfg, Target::Bits(8 * 100_000), true, Executor::Parallel)
        .unwrap()
        .bits
        .to_unpacked();
    let battery = BatteryConfig::new(100_000);
    group.throughput(Throughput::Elements(bits.len() as u64));
    for (name, exec) in EXECUTORS {
        group.bench_function(name, |b| {
            b.iter(|| run_battery(black_box(&bits), &battery, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_simulation, bench_sweep, bench_battery);
criterion_main!(benches);
