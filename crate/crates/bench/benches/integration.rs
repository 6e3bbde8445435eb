use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use mbsym::integrators::{integrate, step};
use mbsym::{IntegratorId, SystemId};
use mbsym_bench::{STATE5, STATE6};

fn single_steps(c: &mut Criterion) {
    let mut g = c.benchmark_group("step");
    for method in IntegratorId::ALL {
        g.bench_with_input(BenchmarkId::new(method.name(), "mb5"), &STATE5, |b, x| {
            b.iter(|| step(method, SystemId::Mb5, black_box(x), 0.0, 1e-2).unwrap())
        });
        g.bench_with_input(BenchmarkId::new(method.name(), "ham6"), &STATE6, |b, x| {
            b.iter(|| step(method, SystemId::Ham6, black_box(x), 0.0, 1e-2).unwrap())
        });
    }
    g.finish();
}

// T = 10 at h = 1e-3: ten thousand steps per run.
fn trajectories(c: &mut Criterion) {
    let mut g = c.benchmark_group("integrate_t10");
    g.sample_size(10);
    for method in IntegratorId::ALL {
        g.bench_function(BenchmarkId::new(method.name(), "mb5"), |b| {
            b.iter(|| integrate(method, SystemId::Mb5, black_box(&STATE5), 0.0, 10.0, 1e-3).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, single_steps, trajectories);
criterion_main!(benches);
