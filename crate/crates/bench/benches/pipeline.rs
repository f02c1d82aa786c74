use std::hint::black_box;

use coarse_l1::analysis::{exhaust, ExhaustParams, Strategy};
use coarse_l1::decomposition::{kpr_decompose, Offsets, ResidueConvention};
use coarse_l1::embedding::embed_scale;
use coarse_l1::graphcore::{generate, metric_of, Family, FamilySpec, Graph, VertexMeasure};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn grid(side: usize) -> Graph {
    generate(&FamilySpec::new(
        Family::Grid2d {
            rows: side,
            cols: side,
        },
        0,
    ))
    .unwrap()
}

fn metric(c: &mut Criterion) {
    let mut group = c.benchmark_group("metric_of");
    for side in [10, 20, 30] {
        let g = grid(side);
        group.bench_with_input(BenchmarkId::from_parameter(side), &g, |b, g| {
            b.iter(|| metric_of(black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn decompose(c: &mut Criterion) {
    let g = grid(30);
    let mut group = c.benchmark_group("kpr_decompose");
    for delta in [2u32, 8, 32] {
        let offsets = Offsets::new(delta, vec![1, delta / 2, delta, 1, 2]).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(delta), &offsets, |b, o| {
            b.iter(|| kpr_decompose(black_box(&g), o, ResidueConvention::Literal))
        });
    }
    group.finish();
}

fn embed(c: &mut Criterion) {
    let g = grid(20);
    let mut group = c.benchmark_group("embed_scale");
    group.sample_size(20);
    for index in [1u32, 3, 5] {
        group.bench_with_input(
            BenchmarkId::from_parameter(1u32 << index),
            &index,
            |b, &i| {
                b.iter(|| {
                    embed_scale(black_box(&g), i, 5, 64, 1, ResidueConvention::Literal).unwrap()
                })
            },
        );
    }
    group.finish();
}

fn exhaustion(c: &mut Criterion) {
    let mut group = c.benchmark_group("exhaust");
    group.sample_size(20);
    let small = metric_of(&grid(4)).unwrap();
    let large = metric_of(&grid(12)).unwrap();
    let cases = [
        ("exhaustive/4x4", &small, Strategy::Exhaustive),
        ("sweep/12x12", &large, Strategy::Sweep),
        ("balls/12x12", &large, Strategy::Balls),
    ];
    for (name, m, strategy) in cases {
        let nu = VertexMeasure::uniform(m.len());
        let params = ExhaustParams {
            s: 1,
            threshold: 4.0,
            phi: 0.5,
            strategy,
        };
        group.bench_function(name, |b| {
            b.iter(|| exhaust(black_box(m), &nu, params).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, metric, decompose, embed, exhaustion);
criterion_main!(benches);
