use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gauge_hubo::anneal::{AnnealerParams, Problem, SaParams};
use gauge_hubo::graph::gen_torus_lattice;
use gauge_hubo::parallel::{derive_seed, map_samples, map_sequential};

const BATCH: usize = 16;

fn batches(c: &mut Criterion) {
    let g = gen_torus_lattice(10).unwrap();
    let problem = Problem::new(&g);
    let lqa = AnnealerParams { n_iter: 200, ..Default::default() };
    let sa = SaParams { sweeps: 200, ..Default::default() };

    let mut group = c.benchmark_group("torus10_batch16");
    group.sample_size(10);
    let glqa_sample = |i: usize| {
        let p = AnnealerParams { seed: derive_seed(1, i as u64), ..lqa };
        problem.glqa_run(&p).map(|r| r.energy).unwrap_or(f64::NAN)
    };
    let sa_sample = |i: usize| {
        let p = SaParams { seed: derive_seed(1, i as u64), ..sa };
        problem.sa_run(&p).map(|r| r.energy).unwrap_or(f64::NAN)
    };
    group.bench_function(BenchmarkId::new("glqa", "sequential"), |b| {
        b.iter(|| black_box(map_sequential(BATCH, glqa_sample)))
    });
    group.bench_function(BenchmarkId::new("glqa", "parallel"), |b| {
        b.iter(|| black_box(map_samples(BATCH, None, glqa_sample)))
    });
    group.bench_function(BenchmarkId::new("sa", "sequential"), |b| {
        b.iter(|| black_box(map_sequential(BATCH, sa_sample)))
    });
    group.bench_function(BenchmarkId::new("sa", "parallel"), |b| {
        b.iter(|| black_box(map_samples(BATCH, None, sa_sample)))
    });
    group.finish();
}

criterion_group!(benches, batches);
criterion_main!(benches);
