//! Randomized differential tests against the dense oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use stabkit::engine::{sim, EngineConfig};
use stabkit::oracle::DenseState;
use stabkit::pbc::{self, verify_transpile};
use stabkit::qec::{random_clifford_circuit, random_clifford_t_circuit};
use stabkit::{Gate, Result};

const EPS: f64 = 1e-9;

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub kind: &'static str,
    pub trials: usize,
    pub max_qubits: usize,
    pub seed: u64,
    /// Measurements compared (tableau) or programs compared (transpile).
    pub checks: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_tv: Option<f64>,
    pub first_failure: Option<String>,
}

/// Follows each tableau outcome in the oracle: deterministic outcomes
/// must have probability 1, random ones probability 1/2.
pub fn tableau(trials: usize, max_qubits: usize, max_gates: usize, seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerifyReport {
        kind: "tableau",
        trials,
        max_qubits,
        seed,
        checks: 0,
        failures: 0,
        worst_tv: None,
        first_failure: None,
    };
    for trial in 0..trials {
        let n = rng.gen_range(1..=max_qubits);
        let gates = rng.gen_range(1..=max_gates);
        let density = rng.gen_range(0.1..=0.3);
        let circuit_seed = rng.gen();
        let c = random_clifford_circuit(n, gates, density, circuit_seed)?;
        let (_, record) = sim(&c, EngineConfig::new(1, circuit_seed))?;
        let mut state = DenseState::new(n)?;
        let mut entries = record.entries.iter();
        for &g in c.gates() {
            let Gate::Measure(q) = g else {
                state.apply(g)?;
                continue;
            };
            let e = entries.next().expect("one entry per measurement");
            let p = state.prob_z(q, e.outcome)?;
            let want = if e.deterministic { 1.0 } else { 0.5 };
            report.checks += 1;
            if (p - want).abs() > EPS {
                report.failures += 1;
                report.first_failure.get_or_insert_with(|| {
                    format!("trial {trial} (circuit seed {circuit_seed}): gate {} outcome probability {p}", e.gate_index)
                });
            }
            state.project_z(q, e.outcome)?;
        }
    }
    Ok(report)
}

pub fn transpile(trials: usize, max_qubits: usize, max_gates: usize, seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerifyReport {
        kind: "transpile",
        trials,
        max_qubits,
        seed,
        checks: 0,
        failures: 0,
        worst_tv: Some(0.0),
        first_failure: None,
    };
    for trial in 0..trials {
        let n = rng.gen_range(1..=max_qubits);
        let gates = rng.gen_range(1..=max_gates);
        let density = rng.gen_range(0.1..=0.5);
        let circuit_seed = rng.gen();
        let c = random_clifford_t_circuit(n, gates, density, circuit_seed)?;
        let result = pbc::transpile(&c).and_then(|p| verify_transpile(&c, &p));
        report.checks += 1;
        let failure = match result {
            Ok(r) => {
                report.worst_tv = report.worst_tv.map(|w| w.max(r.tv_distance));
                (!r.passed).then(|| format!("TV distance {:e}", r.tv_distance))
            }
            Err(e) => Some(e.to_string()),
        };
        if let Some(why) = failure {
            report.failures += 1;
            report
                .first_failure
                .get_or_insert_with(|| format!("trial {trial} (circuit seed {circuit_seed}): {why}"));
        }
    }
    Ok(report)
}
