use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qfsplit_core::{
    chain_verify, delta, gamma_feasible, ExponentMatrix, FieldCtx, FrobIdeal, Poly, RingCtx,
};

const QUARTIC: &str = "x^4 + x*y^3 + y*z^3 + z*w^3";

fn ring(p: u64, vars: &str) -> RingCtx {
    RingCtx::with_vars(FieldCtx::prime(p).unwrap(), vars).unwrap()
}

fn trunc_pow(c: &mut Criterion) {
    let rg = ring(2, "x,y,z,w");
    let f = Poly::parse(&rg, QUARTIC).unwrap();
    let d = delta(&f).unwrap();
    let mut group = c.benchmark_group("trunc_pow");
    for r in [4u32, 6, 8] {
        let ideal = FrobIdeal::frobenius_power(&rg, r).unwrap();
        let k = (1u64 << (r - 1)) - 1;
        group.bench_with_input(BenchmarkId::new("delta_f", r), &k, |b, &k| {
            b.iter(|| d.trunc_pow(black_box(k), &ideal).unwrap())
        });
    }
    group.finish();

    let rg = ring(5, "x,y,z,w");
    let f = Poly::parse(&rg, "x^4 + x*y^3 + z^4 + z*w^3").unwrap();
    let ideal = FrobIdeal::new(&rg, 5).unwrap();
    c.bench_function("trunc_pow/schur_p5", |b| {
        b.iter(|| f.trunc_pow(black_box(4), &ideal).unwrap())
    });
}

fn delta_bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("delta");
    for p in [2u64, 3, 5] {
        let rg = ring(p, "x,y,z,w");
        let f = Poly::parse(&rg, QUARTIC).unwrap().pow(p - 1).unwrap();
        group.bench_with_input(BenchmarkId::new("quartic_pow", p), &f, |b, f| {
            b.iter(|| delta(black_box(f)).unwrap())
        });
    }
    group.finish();
}

fn gamma(c: &mut Criterion) {
    let e = ExponentMatrix::new(
        vec![
            vec![4, 0, 0, 0],
            vec![1, 3, 0, 0],
            vec![0, 1, 3, 0],
            vec![0, 0, 1, 3],
        ],
        4,
    )
    .unwrap();
    let mut group = c.benchmark_group("gamma_feasible");
    for (q, s) in [(28u64, 27u64), (512, 510), (1997, 1995)] {
        group.bench_with_input(BenchmarkId::from_parameter(q), &(q, s), |b, &(q, s)| {
            b.iter(|| gamma_feasible(&e, black_box(q), s).unwrap())
        });
    }
    group.finish();
}

fn chain(c: &mut Criterion) {
    let rg = ring(2, "x,y,z,w,t");
    let mut group = c.benchmark_group("chain_verify");
    for m in [4u64, 6, 511] {
        let g = Poly::parse(&rg, &format!("{QUARTIC} + t^{m}")).unwrap();
        let a = Poly::monomial(&rg, &[2, 1, 2, 3, 1023 - 2 * m]).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(m), &(g, a), |b, (g, a)| {
            b.iter(|| chain_verify(g, a, 10).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, trunc_pow, delta_bench, gamma, chain);
criterion_main!(benches);
