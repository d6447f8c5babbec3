use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use planarlab_core::bounds::{conjecture_scan, witness_search, BaseFilter, ScanConfig, ScanOptions, SearchStrategy};
use planarlab_core::padic::Padic;
use planarlab_core::{interpolate, is_planar, make_ctx, FieldCtx, FieldElem, FuncTable};

fn ctx(p: u64, n: u32) -> Arc<FieldCtx> {
    Arc::new(make_ctx(p, n).unwrap())
}

fn field_ops(c: &mut Criterion) {
    let f = ctx(7, 4);
    let xs: Vec<FieldElem> = f.elements().skip(1).step_by(7).collect();
    c.bench_function("field/mul_7^4", |b| {
        b.iter(|| xs.iter().fold(FieldElem::ONE, |acc, &x| f.mul(acc, black_box(x))))
    });
    c.bench_function("field/inv_7^4", |b| b.iter(|| xs.iter().map(|&x| f.inv(x).unwrap().index()).sum::<u32>()));
}

fn interpolation(c: &mut Criterion) {
    let mut group = c.benchmark_group("interpolate");
    for (p, n) in [(3, 4), (5, 3), (7, 4)] {
        let f = ctx(p, n);
        let t = FuncTable::monomial(f.clone(), 14);
        group.bench_with_input(BenchmarkId::from_parameter(f.q()), &t, |b, t| b.iter(|| interpolate(black_box(t))));
    }
    group.finish();
}

fn planarity(c: &mut Criterion) {
    let f = ctx(7, 4);
    let square = FuncTable::monomial(f.clone(), 2);
    let generic = FuncTable::from_fn(f.clone(), |x| f.add(f.pow(x, 2), f.pow(x, 50)));
    c.bench_function("planar/monomial_7^4", |b| b.iter(|| is_planar(black_box(&square)).planar));
    c.bench_function("planar/generic_7^4", |b| b.iter(|| is_planar(black_box(&generic)).planar));
}

fn witnesses(c: &mut Criterion) {
    c.bench_function("witness/exhaustive_7^4_all_d", |b| {
        b.iter(|| (1..2400u64).filter(|&d| witness_search(7, 4, d, SearchStrategy::Exhaustive, None).unwrap().is_some()).count())
    });
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    for cap in [10_000u64, 100_000] {
        let cfg = ScanConfig::new(cap, BaseFilter::Primes);
        group.bench_with_input(BenchmarkId::from_parameter(cap), &cfg, |b, cfg| {
            b.iter(|| conjecture_scan(cfg, &ScanOptions::default()).unwrap().cells.len())
        });
    }
    group.finish();
}

fn gauss_sums(c: &mut Criterion) {
    let mut group = c.benchmark_group("gauss_sum");
    for (p, n) in [(3, 2), (5, 2), (3, 3)] {
        let pd = Padic::new(ctx(p, n), 81).unwrap();
        group.bench_function(BenchmarkId::new("valuation", pd.field().q()), |b| {
            b.iter(|| pd.gauss_sum_inverse(FieldElem::ONE, black_box(5)).unwrap().pi_valuation().unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, field_ops, interpolation, planarity, witnesses, gauss_sums);
criterion_main!(benches);
