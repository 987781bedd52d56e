use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stabkit::pbc::transpile;
use stabkit::qec::random_clifford_t_circuit;

fn transpiler(c: &mut Criterion) {
    let mut group = c.benchmark_group("transpile");
    for (n, gates) in [(6, 60), (20, 400), (50, 2000)] {
        let circuit = random_clifford_t_circuit(n, gates, 0.3, 9).unwrap();
        group.bench_with_input(BenchmarkId::new("random", format!("n{n}_g{gates}")), &circuit, |b, circuit| {
            b.iter(|| transpile(black_box(circuit)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, transpiler);
criterion_main!(benches);
