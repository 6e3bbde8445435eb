use criterion::{black_box, criterion_group, criterion_main, Criterion};

use mbsym::poisson::{jacobi_residuals, PoissonTensor};
use mbsym::symmetry::solve_determining;
use mbsym::verify::run_suite;
use mbsym::{Suite, VerifyConfig};

fn poisson(c: &mut Criterion) {
    let pi = PoissonTensor::displayed();
    c.bench_function("jacobi_residuals", |b| b.iter(|| jacobi_residuals(black_box(&pi)).unwrap()));
    let cfg = VerifyConfig::default();
    c.bench_function("suite_poisson", |b| b.iter(|| run_suite(Suite::Poisson, black_box(&cfg))));
}

fn solver(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_determining");
    g.sample_size(20);
    for d in [1, 2, 3] {
        g.bench_function(format!("degree_{d}"), |b| b.iter(|| solve_determining(black_box(d)).unwrap()));
    }
    g.finish();
}

fn full_suite(c: &mut Criterion) {
    let cfg = VerifyConfig::default();
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    g.bench_function("all", |b| b.iter(|| run_suite(Suite::All, black_box(&cfg))));
    g.finish();
}

criterion_group!(benches, poisson, solver, full_suite);
criterion_main!(benches);
