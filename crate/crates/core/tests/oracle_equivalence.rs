mod common;

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabkit::engine::{sim, EngineConfig};
use stabkit::oracle::DenseState;
use stabkit::pbc::push_through;

#[test]
fn stabilizers_have_unit_expectation() {
    let mut r = ChaCha8Rng::seed_from_u64(21);
    for i in 0..300 {
        let n = r.gen_range(1..=8);
        let gates = r.gen_range(1..=80);
        let c = common::clifford_circuit(&mut r, n, gates, 0.0, false);
        let (t, _) = sim(&c, EngineConfig::new(1, i)).unwrap();
        let mut state = DenseState::new(n).unwrap();
        for &g in c.gates() {
            state.apply(g).unwrap();
        }
        for s in t.stabilizers() {
            let e = state.expectation(&s).unwrap();
            assert!((e - 1.0).abs() < 1e-9, "circuit {i}: <{s}> = {e}");
        }
    }
}

#[test]
fn stabilizers_survive_measurement() {
    let mut r = ChaCha8Rng::seed_from_u64(22);
    for i in 0..300 {
        let n = r.gen_range(1..=8);
        let gates = r.gen_range(1..=80);
        let c = common::clifford_circuit(&mut r, n, gates, 0.25, false);
        let (t, record) = sim(&c, EngineConfig::new(1, i)).unwrap();
        let mut state = DenseState::new(n).unwrap();
        let mut outcomes = record.entries.iter();
        for &g in c.gates() {
            match g {
                stabkit::Gate::Measure(q) => {
                    state.project_z(q, outcomes.next().unwrap().outcome).unwrap();
                }
                g => state.apply(g).unwrap(),
            }
        }
        for s in t.stabilizers() {
            assert!((state.expectation(&s).unwrap() - 1.0).abs() < 1e-9);
        }
    }
}

/// exp(-iπ/4 P) Q exp(iπ/4 P), evaluated on random states, equals the
/// symbolic `push_through` result.
#[test]
fn quarter_rotation_conjugation() {
    let mut r = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..300 {
        let n = r.gen_range(1..=5);
        let p = common::pauli_string(&mut r, n).with_sign(r.gen());
        let q = common::pauli_string(&mut r, n).with_sign(r.gen());
        let pushed = push_through(&q, &p).unwrap();

        let c = common::clifford_t_circuit(&mut r, n, 5 * n, 0.3);
        let mut psi = DenseState::new(n).unwrap();
        for &g in c.gates().iter().filter(|g| !g.is_measurement()) {
            psi.apply(g).unwrap();
        }
        // <psi| Q' |psi> == <psi| R† Q R |psi> with R = exp(-iπ/4 P)
        let mut rotated = psi.clone();
        rotated.pauli_rotation(&p, PI / 4.0).unwrap();
        let lhs = psi.expectation(&pushed).unwrap();
        let rhs = rotated.expectation(&q).unwrap();
        assert!((lhs - rhs).abs() < 1e-9, "push {p} through {q}: {lhs} vs {rhs}");
    }
}
