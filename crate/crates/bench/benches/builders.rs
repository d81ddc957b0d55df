use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fermirep::fock::LadderSet;
use fermirep::liealg::{generalized_gell_mann, structure_constants};
use fermirep::schwinger::{element_operators, nssfr_un, rep_ucnm};
use fermirep::verify::{check_closure, run_suite};

fn ladders(c: &mut Criterion) {
    let mut group = c.benchmark_group("ladder_set");
    for n in [4usize, 8, 12] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| LadderSet::new(black_box(n)).unwrap())
        });
    }
    group.finish();
}

fn dressed(c: &mut Criterion) {
    let mut group = c.benchmark_group("nssfr_un");
    group.sample_size(10);
    for n in [4usize, 6, 8] {
        let g = generalized_gell_mann(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| nssfr_un(g, n).unwrap())
        });
    }
    group.finish();
}

fn sectors(c: &mut Criterion) {
    let mut group = c.benchmark_group("sector");
    group.sample_size(10);
    group.bench_function("element_operators(6,3)", |b| {
        b.iter(|| element_operators(black_box(6), 3).unwrap())
    });
    let g6 = generalized_gell_mann(6).unwrap();
    group.bench_function("rep_ucnm(4,2)", |b| b.iter(|| rep_ucnm(&g6, 4, 2).unwrap()));
    group.finish();
}

fn closure(c: &mut Criterion) {
    let mut group = c.benchmark_group("closure");
    group.sample_size(10);
    for n in [3usize, 5] {
        let g = generalized_gell_mann(n).unwrap();
        let sc = structure_constants(&g, 1e-10).unwrap();
        let rep = nssfr_un(&g, n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &rep, |b, rep| {
            b.iter(|| check_closure(rep, &sc, 1e-10).unwrap())
        });
    }
    group.bench_function("run_suite(5)", |b| b.iter(|| run_suite(5, 1e-10).unwrap()));
    group.finish();
}

criterion_group!(benches, ladders, dressed, sectors, closure);
criterion_main!(benches);
