use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use idcode_bench::random_code;
use idcode_core::exact::{min_identifying, ExactOptions, StartSize};
use idcode_core::heuristics::greedy_construct;
use idcode_core::signature::{evaluate, DeltaScratch, SignatureTable};

fn table(c: &mut Criterion) {
    let code = random_code(12, 400, 7);
    c.bench_function("build n=12 r=2", |b| {
        b.iter(|| SignatureTable::build(black_box(&code), 2).unwrap())
    });
    c.bench_function("evaluate n=12 r=2", |b| b.iter(|| evaluate(black_box(&code), 2).unwrap()));

    let t = SignatureTable::build(&code, 2).unwrap();
    let mut scratch = DeltaScratch::new();
    let free: Vec<u32> = (0..1u32 << 12).filter(|&w| !t.is_codeword(w)).take(64).collect();
    c.bench_function("swap_delta n=12 r=2 (64 candidates)", |b| {
        b.iter(|| {
            free.iter()
                .map(|&w| t.swap_delta_with(&mut scratch, 3, w).unwrap())
                .sum::<i64>()
        })
    });
    c.bench_function("apply_swap and back n=12 r=2", |b| {
        b.iter_batched(
            || SignatureTable::build(&code, 2).unwrap(),
            |mut t| {
                let old = t.word_at(3).unwrap();
                t.apply_swap(3, free[0]).unwrap();
                t.apply_swap(3, old).unwrap();
                t
            },
            BatchSize::LargeInput,
        )
    });
}

fn constructions(c: &mut Criterion) {
    c.bench_function("greedy r=1 n=9", |b| b.iter(|| greedy_construct(1, 9, black_box(3)).unwrap()));
    let opts = ExactOptions {
        start: StartSize::Trivial,
        ..ExactOptions::default()
    };
    c.bench_function("exact M_1(5)", |b| b.iter(|| min_identifying(1, 5, black_box(&opts)).unwrap()));
}

criterion_group!(benches, table, constructions);
criterion_main!(benches);
