//! Benchmark circuit generators: rotated surface-code syndrome extraction
//! and the random layered workload.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Gate};
use crate::engine::MeasurementRecord;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    X,
    Z,
}

/// A syndrome qubit and the data qubits it couples to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ancilla {
    pub qubit: usize,
    pub kind: CheckKind,
    /// Plaquette position: the data qubit at its north-west corner is
    /// `(row, col)`, which may lie outside the patch for boundary checks.
    pub plaquette: (isize, isize),
    /// Data qubit touched at each of the four CX steps, `None` where the
    /// plaquette is cut by the boundary. X checks visit NW, NE, SW, SE;
    /// Z checks visit NW, SW, NE, SE.
    pub schedule: [Option<usize>; 4],
}

impl Ancilla {
    pub fn neighbors(&self) -> impl Iterator<Item = usize> + '_ {
        self.schedule.iter().flatten().copied()
    }
}

/// Rotated distance-`d` surface code: `d²` data qubits, `d² - 1` ancillas.
///
/// Data qubit `(r, c)` has index `r·d + c`. X ancillas follow the data
/// qubits, then the Z ancillas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceLayout {
    pub distance: usize,
    pub x_ancillas: Vec<Ancilla>,
    pub z_ancillas: Vec<Ancilla>,
}

impl SurfaceLayout {
    pub fn new(distance: usize) -> Result<Self> {
        if distance < 3 || distance.is_multiple_of(2) {
            return Err(Error::InvalidSize(format!(
                "surface code distance must be odd and at least 3, got {distance}"
            )));
        }
        let d = distance as isize;
        let data = |r: isize, c: isize| -> Option<usize> {
            ((0..d).contains(&r) && (0..d).contains(&c)).then(|| (r * d + c) as usize)
        };
        let mut xs = Vec::new();
        let mut zs = Vec::new();
        for r in -1..d {
            for c in -1..d {
                let is_x = (r + c).rem_euclid(2) == 0;
                let bulk = (0..d - 1).contains(&r) && (0..d - 1).contains(&c);
                // Weight-2 X checks sit on the top and bottom edges, Z checks
                // on the left and right edges.
                let keep = bulk
                    || (is_x && (r == -1 || r == d - 1) && (0..d - 1).contains(&c))
                    || (!is_x && (c == -1 || c == d - 1) && (0..d - 1).contains(&r));
                if !keep {
                    continue;
                }
                let (nw, ne, sw, se) = (
                    data(r, c),
                    data(r, c + 1),
                    data(r + 1, c),
                    data(r + 1, c + 1),
                );
                if is_x {
                    xs.push(((r, c), [nw, ne, sw, se]));
                } else {
                    zs.push(((r, c), [nw, sw, ne, se]));
                }
            }
        }
        let base = distance * distance;
        let x_ancillas: Vec<Ancilla> = xs
            .into_iter()
            .enumerate()
            .map(|(i, (plaquette, schedule))| Ancilla {
                qubit: base + i,
                kind: CheckKind::X,
                plaquette,
                schedule,
            })
            .collect();
        let z_base = base + x_ancillas.len();
        let z_ancillas = zs
            .into_iter()
            .enumerate()
            .map(|(i, (plaquette, schedule))| Ancilla {
                qubit: z_base + i,
                kind: CheckKind::Z,
                plaquette,
                schedule,
            })
            .collect();
        Ok(Self {
            distance,
            x_ancillas,
            z_ancillas,
        })
    }

    pub fn num_data(&self) -> usize {
        self.distance * self.distance
    }

    pub fn num_qubits(&self) -> usize {
        self.num_data() + self.x_ancillas.len() + self.z_ancillas.len()
    }

    /// Ancillas in measurement order: X checks, then Z checks.
    pub fn ancillas(&self) -> impl Iterator<Item = &Ancilla> {
        self.x_ancillas.iter().chain(&self.z_ancillas)
    }

    /// The check operator measured by `a`, on `n` qubits (data qubits first).
    pub fn check_operator(&self, a: &Ancilla, n: usize) -> PauliString {
        let op = match a.kind {
            CheckKind::X => Pauli::X,
            CheckKind::Z => Pauli::Z,
        };
        let mut p = PauliString::identity(n);
        for q in a.neighbors() {
            p.set(q, op);
        }
        p
    }

    /// `rounds` rounds of syndrome extraction on a patch initialized to
    /// `|0…0⟩`. Ancillas are not reset between rounds; see [`check_values`].
    pub fn circuit(&self, rounds: usize) -> Result<Circuit> {
        if rounds == 0 {
            return Err(Error::InvalidSize("rounds must be at least 1".into()));
        }
        let mut c = Circuit::new(self.num_qubits())?;
        for _ in 0..rounds {
            c.mark_chunk();
            for a in &self.x_ancillas {
                c.push(Gate::H(a.qubit))?;
            }
            for step in 0..4 {
                c.mark_chunk();
                for a in &self.x_ancillas {
                    if let Some(q) = a.schedule[step] {
                        c.push(Gate::Cx(a.qubit, q))?;
                    }
                }
                for a in &self.z_ancillas {
                    if let Some(q) = a.schedule[step] {
                        c.push(Gate::Cx(q, a.qubit))?;
                    }
                }
            }
            c.mark_chunk();
            for a in &self.x_ancillas {
                c.push(Gate::H(a.qubit))?;
            }
            c.mark_chunk();
            for a in self.ancillas() {
                c.push(Gate::Measure(a.qubit))?;
            }
        }
        Ok(c)
    }
}

/// Surface-code syndrome-extraction circuit; see [`SurfaceLayout::circuit`].
pub fn surface_code_circuit(distance: usize, rounds: usize) -> Result<Circuit> {
    SurfaceLayout::new(distance)?.circuit(rounds)
}

/// Check eigenvalue bits per round, in ancilla measurement order.
///
/// Because ancillas are reused without reset, the raw outcome of round `r`
/// is the check value XOR the ancilla's previous raw outcome.
pub fn check_values(layout: &SurfaceLayout, record: &MeasurementRecord) -> Result<Vec<Vec<bool>>> {
    let per_round = layout.x_ancillas.len() + layout.z_ancillas.len();
    if !record.entries.len().is_multiple_of(per_round) {
        return Err(Error::Input(format!(
            "record has {} entries, not a multiple of {per_round}",
            record.entries.len()
        )));
    }
    let mut prev = vec![false; per_round];
    Ok(record
        .entries
        .chunks(per_round)
        .map(|round| {
            round
                .iter()
                .zip(prev.iter_mut())
                .map(|(e, p)| {
                    let v = e.outcome ^ *p;
                    *p = e.outcome;
                    v
                })
                .collect()
        })
        .collect())
}

/// Random layered workload on `n` qubits.
///
/// Each of the `floor(log2 n)` layers applies H or S (chosen at random) to
/// every qubit of the first half, a CX from qubit `i` to `i + n/2`, and
/// measures `ceil(0.2 · n/2)` distinct random qubits of the second half.
pub fn random_layered_circuit(n: usize, seed: u64) -> Result<Circuit> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::InvalidSize(format!(
            "random layered circuit needs an even qubit count of at least 4, got {n}"
        )));
    }
    let half = n / 2;
    let layers = n.ilog2() as usize;
    let measured = (half as f64 * 0.2).ceil().max(1.0) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n)?;
    for _ in 0..layers {
        c.mark_chunk();
        for i in 0..half {
            c.push(if rng.gen::<bool>() { Gate::H(i) } else { Gate::S(i) })?;
        }
        c.mark_chunk();
        for i in 0..half {
            c.push(Gate::Cx(i, i + half))?;
        }
        c.mark_chunk();
        let mut picks = sample(&mut rng, half, measured).into_vec();
        picks.sort_unstable();
        for k in picks {
            c.push(Gate::Measure(half + k))?;
        }
    }
    Ok(c)
}

fn random_clifford<R: Rng>(rng: &mut R, n: usize) -> Gate {
    let q = rng.gen_range(0..n);
    let kinds = if n < 2 { 6 } else { 9 };
    match rng.gen_range(0..kinds) {
        0 => Gate::H(q),
        1 => Gate::S(q),
        2 => Gate::Sdg(q),
        3 => Gate::X(q),
        4 => Gate::Y(q),
        5 => Gate::Z(q),
        k => {
            let mut t = rng.gen_range(0..n - 1);
            if t >= q {
                t += 1;
            }
            match k {
                6 => Gate::Cx(q, t),
                7 => Gate::Cz(q, t),
                _ => Gate::Swap(q, t),
            }
        }
    }
}

/// Uniformly mixed Clifford gates, each replaced by a Z measurement of a
/// random qubit with probability `meas_density`.
pub fn random_clifford_circuit(n: usize, gates: usize, meas_density: f64, seed: u64) -> Result<Circuit> {
    if !(0.0..=1.0).contains(&meas_density) {
        return Err(Error::Input(format!("measurement density {meas_density} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n)?;
    for _ in 0..gates {
        let g = if rng.gen_bool(meas_density) {
            Gate::Measure(rng.gen_range(0..n))
        } else {
            random_clifford(&mut rng, n)
        };
        c.push(g)?;
    }
    Ok(c)
}

/// Clifford+T circuit where each gate is T or T† with probability
/// `t_density`, followed by a Z measurement of every qubit.
pub fn random_clifford_t_circuit(n: usize, gates: usize, t_density: f64, seed: u64) -> Result<Circuit> {
    if !(0.0..=1.0).contains(&t_density) {
        return Err(Error::Input(format!("T density {t_density} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n)?;
    for _ in 0..gates {
        let g = if rng.gen_bool(t_density) {
            let q = rng.gen_range(0..n);
            if rng.gen() {
                Gate::T(q)
            } else {
                Gate::Tdg(q)
            }
        } else {
            random_clifford(&mut rng, n)
        };
        c.push(g)?;
    }
    for q in 0..n {
        c.push(Gate::Measure(q))?;
    }
    Ok(c)
}
