use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cyclodiff::diffsets::{check_all, check_charsum, check_gauss, check_jacobi, cyclotomic_class, check_direct, Method};
use cyclodiff::ff::field_of_order;
use cyclodiff::Limits;

const CASES: [(u64, u64, bool); 4] = [(73, 8, false), (101, 4, false), (1453, 4, true), (1999, 2, false)];

fn checkers(c: &mut Criterion) {
    let limits = Limits::default();
    let modular = Limits {
        cyclotomic_bound: 1,
        ..Limits::default()
    };
    let mut g = c.benchmark_group("checkers");
    for (q, m, modified) in CASES {
        let f = field_of_order(q).unwrap();
        let id = format!("q{q}_m{m}{}", if modified { "_mod" } else { "" });
        g.bench_with_input(BenchmarkId::new("direct", &id), &f, |b, f| {
            b.iter(|| check_direct(f, &cyclotomic_class(f, m, modified).unwrap()).verdict)
        });
        g.bench_with_input(BenchmarkId::new("charsum", &id), &f, |b, f| {
            b.iter(|| check_charsum(f, black_box(m), modified).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("jacobi", &id), &f, |b, f| {
            b.iter(|| check_jacobi(f, black_box(m), modified).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("gauss_group_ring", &id), &f, |b, f| {
            b.iter(|| check_gauss(f, black_box(m), modified, &limits).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("gauss_modular", &id), &f, |b, f| {
            b.iter(|| check_gauss(f, black_box(m), modified, &modular).unwrap())
        });
    }
    g.finish();

    let f = field_of_order(1453).unwrap();
    c.bench_function("check_all_q1453_m4_mod", |b| {
        b.iter(|| check_all(&f, 4, true, &Method::ALL, &limits).unwrap().verdict)
    });
}

criterion_group!(benches, checkers);
criterion_main!(benches);
