//! Workloads shared by the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabkit::grouping::WeightedPauli;
use stabkit::{Pauli, PauliString};

/// Qubit counts for the random layered workload.
pub const RANDOM_SIZES: [usize; 4] = [64, 128, 256, 512];

/// Surface-code distances, each run for `d` rounds.
pub const SURFACE_DISTANCES: [usize; 4] = [3, 5, 7, 9];

pub fn random_pauli(rng: &mut ChaCha8Rng, n: usize) -> PauliString {
    let mut p = PauliString::identity(n);
    for q in 0..n {
        p.set(q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.gen_range(0..4)]);
    }
    p
}

pub fn random_paulis(n: usize, count: usize, seed: u64) -> Vec<PauliString> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_pauli(&mut rng, n)).collect()
}

/// Random weighted terms. Duplicates are possible and harmless here.
pub fn random_hamiltonian(n: usize, terms: usize, seed: u64) -> Vec<WeightedPauli> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..terms)
        .map(|_| {
            let coeff = rng.gen_range(-1.0..1.0);
            WeightedPauli::new(coeff, random_pauli(&mut rng, n))
        })
        .collect()
}
