use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use palmcheck::axb::{run_axb_suite, AxbConfig, QuadratureGrid, Window};
use palmcheck::group::PermGroup;
use palmcheck::instance::{build, generate, standard, Limits};
use palmcheck::suite::{run_suite, Suite, SuiteOptions};

fn group_enumeration(c: &mut Criterion) {
    c.bench_function("enumerate S4", |b| b.iter(|| PermGroup::symmetric(black_box(4))));
}

fn exact_suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact suites");
    // seed 0: C3 natural; seed 1: D4 on two orbits; seed 22: D5
    for seed in [0u64, 1, 22] {
        let inst = build(&generate(&standard(seed)).unwrap(), &Limits::default()).unwrap();
        for suite in Suite::EXACT {
            g.bench_with_input(BenchmarkId::new(suite.name(), seed), &inst, |b, inst| {
                b.iter(|| run_suite(inst, suite, &SuiteOptions::default()).unwrap())
            });
        }
    }
    g.finish();
}

fn quadrature(c: &mut Criterion) {
    c.bench_function("gauss-legendre order 64 grid", |b| {
        b.iter(|| QuadratureGrid::new(Window::default(), black_box(64)).unwrap())
    });
    c.bench_function("axb suite", |b| b.iter(|| run_axb_suite(&AxbConfig::default()).unwrap()));
}

criterion_group!(benches, group_enumeration, exact_suites, quadrature);
criterion_main!(benches);
