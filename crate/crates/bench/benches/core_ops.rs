//! Timings for the exact-arithmetic hot spots: rational rank, full
//! alignment verification, the LP prover, and one sum-rate evaluation.

use criterion::{criterion_group, criterion_main, Criterion};
use dof_core::entropy::{parse_file, prove, Mode};
use dof_core::{
    alignment_report, build_example_channel, decoder_view, exact_rank, example_scheme,
    search_power_assignment, sum_rate,
};
use std::hint::black_box;

const LEMMA: &str = include_str!("../../../inequalities/lemma1.ineq");

fn bench_exact_rank(c: &mut Criterion) {
    let channel = build_example_channel();
    let scheme = example_scheme();
    let joint = decoder_view(&channel, &scheme, 1).unwrap().joint();
    c.bench_function("exact_rank joint 10x12", |b| {
        b.iter(|| exact_rank(black_box(&joint)))
    });
}

fn bench_alignment_report(c: &mut Criterion) {
    let channel = build_example_channel();
    let scheme = example_scheme();
    c.bench_function("alignment_report 4 decoders", |b| {
        b.iter(|| alignment_report(black_box(&channel), black_box(&scheme)).unwrap())
    });
}

fn bench_prove_lemma(c: &mut Criterion) {
    let file = parse_file(LEMMA).unwrap();
    c.bench_function("prove lemma mi-only", |b| {
        b.iter(|| prove(black_box(&file.target), black_box(&file.constraints), Mode::MiOnly).unwrap())
    });
}

fn bench_sum_rate(c: &mut Criterion) {
    let channel = build_example_channel();
    let scheme = example_scheme();
    c.bench_function("sum_rate at 110 dB", |b| {
        b.iter(|| sum_rate(black_box(&channel), black_box(&scheme), 1e11).unwrap())
    });
}

fn bench_search(c: &mut Criterion) {
    c.bench_function("search_power_assignment max 1", |b| {
        b.iter(|| search_power_assignment(black_box(1)))
    });
}

criterion_group!(
    benches,
    bench_exact_rank,
    bench_alignment_report,
    bench_prove_lemma,
    bench_sum_rate,
    bench_search
);
criterion_main!(benches);
