use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gliderep_core::par::{set_mode, ExecMode};
use gliderep_core::suites::{anti_diagonal, pgroup_thm};

fn modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("suites");
    group.sample_size(10).measurement_time(Duration::from_secs(20));
    for (name, mode) in [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)] {
        group.bench_with_input(BenchmarkId::new("pgroup-thm/16", name), &mode, |b, &m| {
            set_mode(m);
            b.iter(|| pgroup_thm(16).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("anti-diagonal/8", name), &mode, |b, &m| {
            set_mode(m);
            b.iter(|| anti_diagonal(8, 0).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, modes);
criterion_main!(benches);
