//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use stabkit::{Circuit, Gate, PauliString, WeightedPauli};

fn two_distinct<R: Rng>(rng: &mut R, n: usize) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

/// A random Clifford gate on `n` qubits (never a measurement).
pub fn clifford_gate<R: Rng>(rng: &mut R, n: usize) -> Gate {
    let q = rng.gen_range(0..n);
    let pick = if n < 2 { rng.gen_range(0..6) } else { rng.gen_range(0..9) };
    match pick {
        0 => Gate::H(q),
        1 => Gate::S(q),
        2 => Gate::Sdg(q),
        3 => Gate::X(q),
        4 => Gate::Y(q),
        5 => Gate::Z(q),
        k => {
            let (a, b) = two_distinct(rng, n);
            match k {
                6 => Gate::Cx(a, b),
                7 => Gate::Cz(a, b),
                _ => Gate::Swap(a, b),
            }
        }
    }
}

/// Clifford circuit where each gate is a Z measurement with probability
/// `meas_density`. With `chunks`, chunk marks are sprinkled in at random,
/// some of which will collide.
pub fn clifford_circuit<R: Rng>(rng: &mut R, n: usize, gates: usize, meas_density: f64, chunks: bool) -> Circuit {
    let mut c = Circuit::new(n).unwrap();
    for _ in 0..gates {
        if chunks && rng.gen_bool(0.15) {
            c.mark_chunk();
        }
        let g = if rng.gen_bool(meas_density) {
            Gate::Measure(rng.gen_range(0..n))
        } else {
            clifford_gate(rng, n)
        };
        c.push(g).unwrap();
    }
    c
}

/// Collision-free layers of one-qubit Cliffords and disjoint CX pairs, each
/// in its own chunk, with a few measurements in between.
pub fn layered_circuit<R: Rng>(rng: &mut R, n: usize, layers: usize) -> Circuit {
    let mut c = Circuit::new(n).unwrap();
    let mut qubits: Vec<usize> = (0..n).collect();
    for _ in 0..layers {
        c.mark_chunk();
        for q in 0..n {
            let g = [Gate::H(q), Gate::S(q), Gate::Sdg(q), Gate::X(q)][rng.gen_range(0..4)];
            c.push(g).unwrap();
        }
        c.mark_chunk();
        qubits.shuffle(rng);
        for pair in qubits.chunks_exact(2) {
            c.push(Gate::Cx(pair[0], pair[1])).unwrap();
        }
        c.mark_chunk();
        for _ in 0..rng.gen_range(0..=n / 8 + 1) {
            c.push(Gate::Measure(rng.gen_range(0..n))).unwrap();
        }
    }
    c
}

/// Unitary Clifford+T circuit with `t_density` of its gates being T or T†,
/// followed by a Z measurement of every qubit.
pub fn clifford_t_circuit<R: Rng>(rng: &mut R, n: usize, gates: usize, t_density: f64) -> Circuit {
    let mut c = Circuit::new(n).unwrap();
    for _ in 0..gates {
        let g = if rng.gen_bool(t_density) {
            let q = rng.gen_range(0..n);
            if rng.gen_bool(0.5) {
                Gate::T(q)
            } else {
                Gate::Tdg(q)
            }
        } else {
            clifford_gate(rng, n)
        };
        c.push(g).unwrap();
    }
    for q in 0..n {
        c.push(Gate::Measure(q)).unwrap();
    }
    c
}

pub fn pauli_string<R: Rng>(rng: &mut R, n: usize) -> PauliString {
    let mut p = PauliString::identity(n);
    for q in 0..n {
        p.set(q, [stabkit::Pauli::I, stabkit::Pauli::X, stabkit::Pauli::Y, stabkit::Pauli::Z][rng.gen_range(0..4)]);
    }
    p
}

/// Random weighted terms, with distinct Pauli strings.
pub fn hamiltonian<R: Rng>(rng: &mut R, n: usize, terms: usize) -> Vec<WeightedPauli> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    while out.len() < terms {
        let p = pauli_string(rng, n);
        if p.is_identity() || !seen.insert(p.to_string()) {
            continue;
        }
        out.push(WeightedPauli::new(rng.gen_range(-1.0..1.0), p));
    }
    out
}
