use cergm_core::oracle::{enumerate_psi, mcmc_sample};
use cergm_core::SubgraphSpec;
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    let h = SubgraphSpec::triangle();
    group.bench_function("enumerate n=6", |b| {
        b.iter(|| enumerate_psi(6, 0.5, 0.1, &h, black_box(2.0)).unwrap())
    });
    group.bench_function("enumerate n=7", |b| {
        b.iter(|| enumerate_psi(7, 0.5, 0.05, &h, black_box(2.0)).unwrap())
    });
    group.bench_function("mcmc n=40 triangle 20k steps", |b| {
        b.iter(|| mcmc_sample(40, 400, &h, black_box(1.0), 20_000, 0, 1).unwrap())
    });
    group.bench_function("mcmc n=40 two-star 20k steps", |b| {
        let s = SubgraphSpec::two_star();
        b.iter(|| mcmc_sample(40, 400, &s, black_box(1.0), 20_000, 0, 1).unwrap())
    });
    group.finish();
}

criterion_group!(benches, oracle);
criterion_main!(benches);
