//! Clifford+T to Pauli-based-computation transpiler.
//!
//! The pipeline walks the circuit backwards, absorbing every Clifford into a
//! measurement tableau and turning each `T`/`T†` into a signed Pauli
//! rotation axis conjugated by the Cliffords that precede it. The resulting
//! rotations are then packed into commuting layers, and pairs of identical
//! rotations inside a layer are fused into quarter rotations that are pushed
//! through the remaining layers into the measurement basis.
//!
//! Conventions: a row `(-1)^r P` stands for the eighth-turn rotation
//! `exp(-iπ/8 · (-1)^r P)`, so `T` on qubit `q` is `+Z_q` and `T†` is `-Z_q`
//! (up to global phase). Layers are kept in forward time order.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::oracle::{tv_distance, DenseState, Distribution};
use crate::pauli::{Pauli, PauliString};
use crate::tableau::{PauliRows, Tableau};

/// T rotation axes in the order they were appended, i.e. reverse circuit order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TTableau {
    rows: PauliRows,
}

impl TTableau {
    pub fn new(n: usize) -> Self {
        Self {
            rows: PauliRows::new(n),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, i: usize) -> PauliString {
        self.rows.row(i)
    }

    pub fn rows(&self) -> Vec<PauliString> {
        self.rows.rows().collect()
    }
}

/// Output of [`build_tableaus`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableaus {
    pub measurement: Tableau,
    pub t: TTableau,
    /// Which qubits the source circuit measured at the end. All `true` when
    /// it had no terminal measurements.
    pub measured: Vec<bool>,
}

/// Splits off trailing Z measurements and rejects any earlier ones.
fn unitary_part(c: &Circuit) -> Result<(&[Gate], Vec<bool>)> {
    let gates = c.gates();
    let body_len = gates
        .iter()
        .rposition(|g| !g.is_measurement())
        .map_or(0, |i| i + 1);
    let (body, tail) = gates.split_at(body_len);
    if let Some(pos) = body.iter().position(|g| g.is_measurement()) {
        return Err(Error::Unsupported(format!(
            "mid-circuit measurement at gate {pos}"
        )));
    }
    let mut measured = vec![tail.is_empty(); c.num_qubits()];
    for g in tail {
        for q in g.qubits() {
            if measured[q] {
                return Err(Error::Unsupported(format!("qubit {q} measured twice")));
            }
            measured[q] = true;
        }
    }
    Ok((body, measured))
}

/// Reverse-order construction of the measurement and T tableaus.
///
/// Walking from the last gate, `T`/`T†` append `±Z_q` to the T tableau and
/// a Clifford `G` conjugates the measurement tableau and every T row
/// appended so far by `G⁻¹`, i.e. `P ↦ G†PG`.
pub fn build_tableaus(c: &Circuit) -> Result<Tableaus> {
    let n = c.num_qubits();
    let (body, measured) = unitary_part(c)?;
    let mut measurement = Tableau::new_identity(n)?;
    let mut t = TTableau::new(n);
    for &g in body.iter().rev() {
        match g {
            Gate::T(q) | Gate::Tdg(q) => {
                let row = PauliString::single(n, q, Pauli::Z).with_sign(matches!(g, Gate::Tdg(_)));
                t.rows.push(&row)?;
            }
            g => {
                let inv = g.inverse().expect("unitary gate");
                measurement.apply_gate(inv)?;
                t.rows.as_rows_mut().apply_clifford(inv)?;
            }
        }
    }
    Ok(Tableaus { measurement, t, measured })
}

/// Packs rotations into commuting layers, scanning in forward time order.
///
/// Each rotation moves as early as it can: into the layer right after the
/// last layer holding an anticommuting rotation, or layer 0 if there is none.
pub fn t_separate(t: &TTableau) -> Vec<Vec<PauliString>> {
    t_separate_with(t, ScanOrder::Forward)
}

/// Direction in which [`t_separate_with`] packs rotations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ScanOrder {
    /// Move every rotation as early as possible.
    #[default]
    Forward,
    /// Move every rotation as late as possible.
    Reverse,
}

pub fn t_separate_with(t: &TTableau, order: ScanOrder) -> Vec<Vec<PauliString>> {
    let mut rows = t.rows();
    match order {
        ScanOrder::Forward => {
            rows.reverse();
            separate(rows)
        }
        ScanOrder::Reverse => {
            let mut layers = separate(rows);
            layers.reverse();
            for layer in &mut layers {
                layer.reverse();
            }
            layers
        }
    }
}

fn separate(rows: Vec<PauliString>) -> Vec<Vec<PauliString>> {
    let mut layers: Vec<Vec<PauliString>> = Vec::new();
    for row in rows {
        let blocked = layers
            .iter()
            .rposition(|layer| layer.iter().any(|m| !m.commutes(&row).expect("uniform width")));
        let slot = blocked.map_or(0, |j| j + 1);
        if slot == layers.len() {
            layers.push(vec![row]);
        } else {
            layers[slot].push(row);
        }
    }
    layers
}

/// Conjugates `row` by the quarter rotation `exp(-iπ/4 · P)`: unchanged if
/// they commute, otherwise `i·P·row`. Fails if the product is not Hermitian.
pub fn push_through(row: &PauliString, p: &PauliString) -> Result<PauliString> {
    if row.commutes(p)? {
        return Ok(row.clone());
    }
    let (prod, exponent) = p.product(row)?;
    match (exponent + 1) % 4 {
        0 => Ok(prod),
        2 => Ok(prod.with_sign(true)),
        odd => Err(Error::Invariant(format!(
            "pushing {p} through {row} produced phase i^{odd}"
        ))),
    }
}

fn first_duplicate(layer: &[PauliString]) -> Option<(usize, usize)> {
    let mut seen: HashMap<(&[u64], &[u64]), usize> = HashMap::new();
    for (j, r) in layer.iter().enumerate() {
        if let Some(&i) = seen.get(&(r.x_words(), r.z_words())) {
            return Some((i, j));
        }
        seen.insert((r.x_words(), r.z_words()), j);
    }
    None
}

fn apply_quarter(later: &mut [Vec<PauliString>], m_tab: &mut Tableau, p: &PauliString) -> Result<()> {
    for layer in later.iter_mut() {
        for row in layer.iter_mut() {
            *row = push_through(row, p)?;
        }
    }
    for i in 0..2 * m_tab.num_qubits() {
        let row = m_tab.row(i);
        let pushed = push_through(&row, p)?;
        if pushed != row {
            m_tab.set_row(i, &pushed)?;
        }
    }
    Ok(())
}

fn total_rows(layers: &[Vec<PauliString>]) -> usize {
    layers.iter().map(Vec::len).sum()
}

/// Result of [`t_optimize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Optimized {
    pub layers: Vec<Vec<PauliString>>,
    pub measurement: Tableau,
    /// Full sweeps over the layers, including the final one that found
    /// nothing to remove.
    pub passes: usize,
}

/// Removes duplicate rotations until the row count stops changing.
///
/// Within a layer, two rows with equal `(x, z)` bits either cancel
/// (opposite signs, `T·T† = I`) or fuse into a quarter rotation (equal
/// signs) that is conjugated through every later layer and finally into
/// the measurement tableau. Layers are swept from last to first.
pub fn t_optimize(mut layers: Vec<Vec<PauliString>>, mut measurement: Tableau) -> Result<Optimized> {
    let mut count = total_rows(&layers);
    let mut passes = 0;
    while count > 0 {
        passes += 1;
        for i in (0..layers.len()).rev() {
            while let Some((a, b)) = first_duplicate(&layers[i]) {
                let second = layers[i].remove(b);
                let first = layers[i].remove(a);
                if first.sign() == second.sign() {
                    let (_, later) = layers.split_at_mut(i + 1);
                    apply_quarter(later, &mut measurement, &first)?;
                }
            }
        }
        layers.retain(|l| !l.is_empty());
        let now = total_rows(&layers);
        if now == count {
            break;
        }
        count = now;
    }
    Ok(Optimized {
        layers,
        measurement,
        passes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PbcStats {
    pub initial_t: usize,
    pub final_rotations_rowcount: usize,
    /// Sum of non-identity positions over all remaining rotations.
    pub final_rotations_pauliweight: usize,
    pub layers: usize,
    pub passes: usize,
    /// Layers that had to be split again after optimization.
    pub resplit_layers: usize,
}

impl PbcStats {
    /// `initial / final` by row count; `1.0` when both are zero and `None`
    /// when every rotation was eliminated from a nonzero start.
    pub fn t_ratio(&self) -> Option<f64> {
        match (self.initial_t, self.final_rotations_rowcount) {
            (0, 0) => Some(1.0),
            (_, 0) => None,
            (i, f) => Some(i as f64 / f as f64),
        }
    }
}

/// Rotation layers followed by a measurement of one Pauli per qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbcProgram {
    pub n: usize,
    /// Commuting layers of eighth-turn rotations, in time order.
    pub layers: Vec<Vec<PauliString>>,
    /// Row `q` replaces the terminal Z measurement of qubit `q`.
    pub measurement_rows: Vec<PauliString>,
    pub measured: Vec<bool>,
    pub stats: PbcStats,
}

fn layers_commute(layer: &[PauliString]) -> bool {
    layer
        .iter()
        .enumerate()
        .all(|(i, a)| layer[i + 1..].iter().all(|b| a.commutes(b).expect("uniform width")))
}

/// Runs the full pipeline: build, separate, optimize, and emit a program.
pub fn transpile(c: &Circuit) -> Result<PbcProgram> {
    transpile_with(c, ScanOrder::Forward)
}

pub fn transpile_with(c: &Circuit, order: ScanOrder) -> Result<PbcProgram> {
    let Tableaus { measurement, t, measured } = build_tableaus(c)?;
    let initial_t = t.len();
    let opt = t_optimize(t_separate_with(&t, order), measurement)?;

    let mut layers = Vec::with_capacity(opt.layers.len());
    let mut resplit_layers = 0;
    for layer in opt.layers {
        if layers_commute(&layer) {
            layers.push(layer);
        } else {
            resplit_layers += 1;
            layers.extend(separate(layer));
        }
    }

    let stats = PbcStats {
        initial_t,
        final_rotations_rowcount: total_rows(&layers),
        final_rotations_pauliweight: layers.iter().flatten().map(PauliString::weight).sum(),
        layers: layers.len(),
        passes: opt.passes,
        resplit_layers,
    };
    Ok(PbcProgram {
        n: c.num_qubits(),
        layers,
        measurement_rows: opt.measurement.stabilizers(),
        measured,
        stats,
    })
}

/// Text form of a program.
///
/// ```text
/// PBC v1
/// qubits 2
/// t_initial 1
/// t_final 1
/// layer 0:
/// +XI
/// measure:
/// +ZI
/// +IZ unmeasured
/// ```
pub fn emit_pbc(p: &PbcProgram) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "PBC v1");
    let _ = writeln!(out, "qubits {}", p.n);
    let _ = writeln!(out, "t_initial {}", p.stats.initial_t);
    let _ = writeln!(out, "t_final {}", p.stats.final_rotations_rowcount);
    for (i, layer) in p.layers.iter().enumerate() {
        let _ = writeln!(out, "layer {i}:");
        for r in layer {
            let _ = writeln!(out, "{r}");
        }
    }
    let _ = writeln!(out, "measure:");
    for (row, &m) in p.measurement_rows.iter().zip(&p.measured) {
        if m {
            let _ = writeln!(out, "{row}");
        } else {
            let _ = writeln!(out, "{row} unmeasured");
        }
    }
    out
}

/// Parses the output of [`emit_pbc`]. The pass count is not part of the
/// text and comes back as zero.
pub fn parse_pbc(text: &str) -> Result<PbcProgram> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut next = |what: &str| -> Result<(usize, &str)> {
        lines.next().ok_or(Error::Parse {
            line: 0,
            message: format!("unexpected end of input, expected {what}"),
        })
    };
    let (line, head) = next("header")?;
    if head != "PBC v1" {
        return Err(Error::Parse {
            line,
            message: format!("expected `PBC v1`, got `{head}`"),
        });
    }
    let mut field = |key: &str| -> Result<usize> {
        let (line, text) = next(key)?;
        text.strip_prefix(key)
            .and_then(|v| v.trim().parse().ok())
            .ok_or(Error::Parse {
                line,
                message: format!("expected `{key} <count>`"),
            })
    };
    let n = field("qubits")?;
    let initial_t = field("t_initial")?;
    let t_final = field("t_final")?;

    let mut layers: Vec<Vec<PauliString>> = Vec::new();
    let mut measurement_rows = Vec::new();
    let mut measured = Vec::new();
    let mut in_measure = false;
    for (line, text) in lines {
        if text.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line, message };
        if text == "measure:" {
            in_measure = true;
            continue;
        }
        if let Some(rest) = text.strip_prefix("layer ").and_then(|r| r.strip_suffix(':')) {
            if in_measure || rest.parse::<usize>().ok() != Some(layers.len()) {
                return Err(err(format!("unexpected layer header `{text}`")));
            }
            layers.push(Vec::new());
            continue;
        }
        let (pauli, flag) = match text.split_once(' ') {
            Some((p, "unmeasured")) if in_measure => (p, false),
            None => (text, true),
            _ => return Err(err(format!("unexpected line `{text}`"))),
        };
        let row: PauliString = pauli.parse().map_err(|e: Error| err(e.to_string()))?;
        if row.num_qubits() != n {
            return Err(err(format!("row `{pauli}` is not {n} qubits wide")));
        }
        if in_measure {
            measurement_rows.push(row);
            measured.push(flag);
        } else {
            layers
                .last_mut()
                .ok_or_else(|| err("rotation outside a layer".into()))?
                .push(row);
        }
    }
    if measurement_rows.len() != n {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!("expected {n} measurement rows, found {}", measurement_rows.len()),
        });
    }
    let rowcount = total_rows(&layers);
    if rowcount != t_final {
        return Err(Error::Parse {
            line: 4,
            message: format!("t_final says {t_final} but {rowcount} rotations follow"),
        });
    }
    Ok(PbcProgram {
        n,
        stats: PbcStats {
            initial_t,
            final_rotations_rowcount: rowcount,
            final_rotations_pauliweight: layers.iter().flatten().map(PauliString::weight).sum(),
            layers: layers.len(),
            passes: 0,
            resplit_layers: 0,
        },
        layers,
        measurement_rows,
        measured,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TranspileReport {
    pub qubits: usize,
    pub tv_distance: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Analytic equivalence tolerance used by [`verify_transpile`].
pub const VERIFY_TOLERANCE: f64 = 1e-9;

/// Distribution of the source circuit's final Z measurement of every qubit.
pub fn circuit_distribution(c: &Circuit) -> Result<Distribution> {
    let (body, _) = unitary_part(c)?;
    let mut state = DenseState::new(c.num_qubits())?;
    for &g in body {
        state.apply(g)?;
    }
    Ok(state.z_distribution())
}

/// Distribution of a program's measurement rows after its rotation layers.
pub fn program_distribution(p: &PbcProgram) -> Result<Distribution> {
    let mut state = DenseState::new(p.n)?;
    for r in p.layers.iter().flatten() {
        state.pauli_rotation(r, PI / 8.0)?;
    }
    state.measure_pauli_distribution(&p.measurement_rows)
}

/// Compares the exact outcome distribution of `c` against that of the
/// program, pairing measurement row `q` with qubit `q`.
pub fn verify_transpile(c: &Circuit, p: &PbcProgram) -> Result<TranspileReport> {
    if c.num_qubits() != p.n {
        return Err(Error::DimensionMismatch {
            expected: c.num_qubits(),
            found: p.n,
        });
    }
    let tv = tv_distance(&circuit_distribution(c)?, &program_distribution(p)?);
    Ok(TranspileReport {
        qubits: p.n,
        tv_distance: tv,
        tolerance: VERIFY_TOLERANCE,
        passed: tv < VERIFY_TOLERANCE,
    })
}
