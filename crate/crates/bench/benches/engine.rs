use criterion::{criterion_group, criterion_main, Criterion};
use nsim_bench::{empty, preset};
use nsim_core::preset::PresetName;
use nsim_core::{
    apply_permutation, automorphism_group, canonical_key, find_color_swap_isomorphism, solve, Perm, SolveOptions,
};
use std::hint::black_box;

fn solving(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve");
    g.sample_size(10);
    let k6 = empty(6);
    g.bench_function("empty K6", |b| b.iter(|| solve(black_box(&k6), SolveOptions::default()).unwrap()));
    let thm3 = preset(PresetName::Thm3 { n: 7 });
    g.bench_function("thm3(7)", |b| b.iter(|| solve(black_box(&thm3), SolveOptions::default()).unwrap()));
    let prop_t = preset(PresetName::PropT { n: 7 });
    g.bench_function("prop-T(7)", |b| b.iter(|| solve(black_box(&prop_t), SolveOptions::default()).unwrap()));
    g.finish();
}

fn symmetry(c: &mut Criterion) {
    let thm2 = preset(PresetName::Thm2 { n: 7 });
    c.bench_function("canonical key thm2(7)", |b| b.iter(|| canonical_key(black_box(&thm2)).unwrap()));

    let two_k5 = preset(PresetName::Thm1 { k: 2 });
    c.bench_function("self colour-swap witness, two K5s", |b| {
        b.iter(|| find_color_swap_isomorphism(black_box(&two_k5), black_box(&two_k5)).unwrap())
    });
    let shuffle = Perm::new(vec![3, 7, 1, 9, 0, 5, 2, 8, 6, 4]).unwrap();
    let moved = apply_permutation(&two_k5, &shuffle).unwrap();
    c.bench_function("isomorphism witness n=10", |b| {
        b.iter(|| nsim_core::find_isomorphism(black_box(&two_k5), black_box(&moved)).unwrap())
    });
    c.bench_function("automorphism group, two K5s", |b| b.iter(|| automorphism_group(black_box(&two_k5))));
}

criterion_group!(benches, solving, symmetry);
criterion_main!(benches);
