//! Parallel versus sequential evaluation of fermionic sums and sweeps.
//!
//! With the default `parallel` feature each benchmark runs twice: on the
//! global rayon pool and inside a one-thread pool. Building with
//! `--no-default-features` measures the plain sequential fallback.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use krverify_core::fermionic::{verify_mn, FermionicInput, KrCounts};
use krverify_core::liealg::{CartanData, Weight};
use krverify_core::{par, sweep};

fn large_case() -> FermionicInput {
    let g2: CartanData = "G2".parse().unwrap();
    let n = KrCounts::parse(2, "1:1=3;2:1=2;1:2=1").unwrap();
    FermionicInput::new(g2, Weight(vec![0, 0]), n).unwrap()
}

fn a2_sweep() -> usize {
    let a2: CartanData = "A2".parse().unwrap();
    let cases = sweep::exhaustive(&a2, 5);
    let ok = par::map_ordered(&cases, |c| {
        let input = FermionicInput::new(a2.clone(), c.lambda.clone(), c.n.clone()).unwrap();
        verify_mn(&input).unwrap().equal_at_1
    });
    ok.into_iter().filter(|&b| b).count()
}

fn modes() -> Vec<(&'static str, Option<rayon::ThreadPool>)> {
    if par::is_parallel() {
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        vec![("rayon", None), ("one-thread", Some(single))]
    } else {
        vec![("sequential", None)]
    }
}

fn run<R: Send>(pool: &Option<rayon::ThreadPool>, f: impl FnOnce() -> R + Send) -> R {
    match pool {
        Some(p) => p.install(f),
        None => f(),
    }
}

fn bench(c: &mut Criterion) {
    let input = large_case();
    let mut group = c.benchmark_group("verify_mn_g2");
    group.sample_size(20);
    for (name, pool) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run(&pool, || verify_mn(&input).unwrap()))
        });
    }
    group.finish();

    let mut group = c.benchmark_group("sweep_a2_load5");
    group.sample_size(10);
    for (name, pool) in modes() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| run(&pool, a2_sweep)));
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
