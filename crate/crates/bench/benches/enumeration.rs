use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use walkmin_bench::{gadget, grid, grid_corners, long_union_star, membership_gadget};
use walkmin_core::engine::{enumerate_trail_matches, shortest_matches};
use walkmin_core::parse;
use walkmin_core::semantics::{mm_membership, mm_set, sms_set};

fn automaton(c: &mut Criterion) {
    let mut group = c.benchmark_group("glushkov");
    for n in [16, 64, 256] {
        let r = long_union_star(n, &["a", "b", "c", "d"]);
        group.bench_with_input(BenchmarkId::from_parameter(n), &r, |b, r| {
            b.iter(|| black_box(r.to_nfa()))
        });
    }
    group.bench_function("parse_r3", |b| {
        b.iter(|| parse(black_box("9(8+755+646+557)*X")).unwrap())
    });
    group.finish();
}

fn grid_queries(c: &mut Criterion) {
    let mut group = c.benchmark_group("grid");
    let r = parse("(r+d)*").unwrap();
    let any = parse("(r+d+b)*").unwrap();
    for n in [3, 4] {
        let g = grid(n);
        let (s, t) = grid_corners(n);
        group.bench_with_input(BenchmarkId::new("shortest", n), &n, |b, _| {
            b.iter(|| shortest_matches(&g, &r, &s, &t).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("mm", n), &n, |b, _| {
            b.iter(|| mm_set(&g, &any, &s, &t).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sms", n), &n, |b, _| {
            b.iter(|| sms_set(&g, &any, &s, &t).unwrap())
        });
    }
    group.finish();
}

fn gadgets(c: &mut Criterion) {
    let mut group = c.benchmark_group("gadget");
    group.sample_size(10);
    for (k, l) in [(3, 1), (3, 2), (4, 2)] {
        let ri = gadget(k, l, 1);
        let id = format!("k{k}_l{l}");
        let (r, r1) = (ri.r(), ri.r1());
        group.bench_function(BenchmarkId::new("mm_set", &id), |b| {
            b.iter(|| mm_set(&ri.graph, &r, &ri.source, &ri.target).unwrap())
        });
        group.bench_function(BenchmarkId::new("r1_trails", &id), |b| {
            b.iter(|| enumerate_trail_matches(&ri.graph, &r1, &ri.source, &ri.target).unwrap())
        });
        let m = membership_gadget(k, l, 1);
        let (mr, w) = (m.r(), m.witness.clone().unwrap());
        group.bench_function(BenchmarkId::new("membership", &id), |b| {
            b.iter(|| mm_membership(&m.graph, &mr, &w).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, automaton, grid_queries, gadgets);
criterion_main!(benches);
