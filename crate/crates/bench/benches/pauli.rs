use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stabkit::grouping::{group_greedy, GroupingMode};
use stabkit::pauli::commutation_vector;
use stabkit_bench::{random_hamiltonian, random_paulis};

fn commutation(c: &mut Criterion) {
    let mut group = c.benchmark_group("commutation_vector");
    for n in [64, 1024, 4096] {
        let rows = random_paulis(n, 1000, 3);
        let probe = random_paulis(n, 1, 4).pop().unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &rows, |b, rows| {
            b.iter(|| commutation_vector(black_box(&probe), rows).unwrap())
        });
    }
    group.finish();
}

fn grouping(c: &mut Criterion) {
    let mut group = c.benchmark_group("grouping");
    let terms = random_hamiltonian(16, 500, 5);
    for mode in [GroupingMode::Qwc, GroupingMode::Gc] {
        group.bench_function(mode.to_string(), |b| b.iter(|| group_greedy(black_box(&terms), mode).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, commutation, grouping);
criterion_main!(benches);
