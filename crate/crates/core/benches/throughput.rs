//! Parallel vs sequential throughput on the three data-parallel hot loops:
//! per-seed optimizer trials, batch feature extraction and batch embedding.
//! `exec::par_map` uses rayon under the default `parallel` feature and
//! collapses to the sequential path without it, so the two series coincide
//! in a `--no-default-features` build.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use stegwolf_core::benchfns::{benchmark_spec, BenchFunction};
use stegwolf_core::colorspace::ENSEMBLE;
use stegwolf_core::exec::{par_map, seq_map};
use stegwolf_core::featpipe::extract;
use stegwolf_core::gwo::{optimize, OptimizerConfig, Variant};
use stegwolf_core::stegosim::{embed_lsbm, synth_cover, PayloadConfig};

fn optimizer_trials(c: &mut Criterion) {
    let spec = benchmark_spec(BenchFunction::F1, 10).unwrap();
    let run_one = |seed: usize| {
        let mut cfg =
            OptimizerConfig::new(Variant::Classic, 20, 60, spec.bounds.clone(), seed as u64)
                .unwrap();
        cfg.bounds = spec.bounds.clone();
        optimize(&spec.function, &cfg).unwrap().best_fitness
    };
    let mut group = c.benchmark_group("optimizer_trials");
    group.sample_size(10);
    for n_trials in [8usize] {
        group.bench_with_input(BenchmarkId::new("seq", n_trials), &n_trials, |b, &n| {
            b.iter(|| seq_map(n, run_one))
        });
        group.bench_with_input(BenchmarkId::new("par", n_trials), &n_trials, |b, &n| {
            b.iter(|| par_map(n, run_one))
        });
    }
    group.finish();
}

fn feature_extraction(c: &mut Criterion) {
    let images: Vec<_> = (0..12).map(|i| synth_cover(64, 64, i).unwrap()).collect();
    let extract_one = |i: usize| extract(&images[i], &ENSEMBLE).unwrap().len();
    let mut group = c.benchmark_group("feature_extraction");
    group.sample_size(10);
    group.bench_function("seq", |b| b.iter(|| seq_map(images.len(), extract_one)));
    group.bench_function("par", |b| b.iter(|| par_map(images.len(), extract_one)));
    group.finish();
}

fn batch_embedding(c: &mut Criterion) {
    let covers: Vec<_> = (0..16).map(|i| synth_cover(128, 128, 100 + i).unwrap()).collect();
    let embed_one = |i: usize| {
        let payload = PayloadConfig::new(0.4, i as u64).unwrap();
        embed_lsbm(&covers[i], &payload).unwrap().pixels()[0]
    };
    let mut group = c.benchmark_group("batch_embedding");
    group.sample_size(10);
    group.bench_function("seq", |b| b.iter(|| seq_map(covers.len(), embed_one)));
    group.bench_function("par", |b| b.iter(|| par_map(covers.len(), embed_one)));
    group.finish();
}

criterion_group!(benches, optimizer_trials, feature_extraction, batch_embedding);
criterion_main!(benches);
