//! Stabilizer-tableau simulation and the tools built on it.
//!
//! - [`pauli`]: bit-packed Pauli strings and commutation checks.
//! - [`tableau`]: the CHP stabilizer/destabilizer tableau.
//! - [`circuit`]: circuit IR, native `.stab` and OpenQASM 2 subset parsers.
//! - [`engine`]: sequential, row-parallel and chunk-parallel execution.
//! - [`qec`]: surface-code and random layered benchmark circuits.
//! - [`grouping`]: QWC/GC grouping of weighted Pauli terms.
//! - [`pbc`]: Clifford+T to Pauli-based-computation transpiler.
//! - [`oracle`]: dense statevector reference simulator.
//! - [`timing`]: benchmark rows and CSV output.

pub mod circuit;
pub mod engine;
pub mod error;
pub mod grouping;
pub mod oracle;
pub mod pauli;
pub mod pbc;
pub mod qec;
pub mod tableau;
pub mod timing;

pub use circuit::{emit_native, parse_native, parse_qasm2_subset, validate_chunks, Circuit, Gate};
pub use engine::{run_shots, sim, sim2d, EngineConfig, MeasurementRecord};
pub use error::{Error, Result};
pub use pauli::{Pauli, PauliString};
pub use tableau::{MeasResult, Tableau};
pub use grouping::{group_greedy, parse_hamiltonian, verify_grouping, GroupingMode, WeightedPauli};
pub use oracle::DenseState;
pub use pbc::{emit_pbc, parse_pbc, transpile, verify_transpile, PbcProgram};
pub use qec::{random_layered_circuit, surface_code_circuit, SurfaceLayout};
