//! Circuit execution against a [`Tableau`].
//!
//! Two modes are provided:
//!
//! - [`sim`] applies gates one at a time. Each Clifford gate is a single
//!   pass over the rows, split into one contiguous block per worker; the
//!   pass returning is the barrier before the next gate.
//! - [`sim2d`] applies every gate of a validated chunk in one pass, so
//!   the barrier is paid once per chunk instead of once per gate.
//!
//! Measurements always run between full barriers. The pivot search is a
//! `fetch_min` over blocks and rowsum phase sums are integer additions, so
//! results do not depend on the worker count. Random outcomes come from a
//! ChaCha stream keyed by `(seed, measurement ordinal)`.

use std::collections::BTreeMap;
use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};
use serde::Serialize;

use crate::circuit::{validate_chunks, ChunkViolation, Circuit, Gate};
use crate::error::{Error, Result};
use crate::tableau::{RowExecutor, RowsMut, Tableau};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub workers: usize,
    pub seed: u64,
    /// Run the tableau audit after every operation. Slow; meant for tests.
    pub audit: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            workers: 1,
            seed: 0,
            audit: false,
        }
    }
}

impl EngineConfig {
    pub fn new(workers: usize, seed: u64) -> Self {
        Self {
            workers,
            seed,
            audit: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MeasurementEntry {
    pub gate_index: usize,
    pub qubit: usize,
    pub outcome: bool,
    pub deterministic: bool,
}

/// One entry per measurement gate, in circuit order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MeasurementRecord {
    pub entries: Vec<MeasurementEntry>,
}

impl MeasurementRecord {
    /// Outcomes as a `0`/`1` string in measurement order.
    pub fn bitstring(&self) -> String {
        self.entries
            .iter()
            .map(|e| if e.outcome { '1' } else { '0' })
            .collect()
    }
}

/// The RNG used for measurement number `ordinal` under `seed`.
pub fn measurement_rng(seed: u64, ordinal: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(ordinal);
    rng
}

/// Fixed-size worker pool splitting rows into contiguous blocks.
pub struct Workers {
    workers: usize,
    pool: Option<ThreadPool>,
}

impl Workers {
    pub fn new(workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(Error::Input("worker count must be at least 1".into()));
        }
        let pool = if workers > 1 {
            Some(
                ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .map_err(|e| Error::Input(format!("cannot start worker pool: {e}")))?,
            )
        } else {
            None
        };
        Ok(Self { workers, pool })
    }

    pub fn count(&self) -> usize {
        self.workers
    }
}

/// Below this many words per row the phase sum is not worth splitting.
const PARALLEL_WORDS: usize = 256;

impl RowExecutor for Workers {
    fn for_each_block<F>(&self, rows: RowsMut<'_>, f: F)
    where
        F: Fn(RowsMut<'_>) + Sync + Send,
    {
        match &self.pool {
            None => f(rows),
            Some(pool) => {
                let blocks = rows.split_even(self.workers);
                let f = &f;
                pool.scope(|s| {
                    for block in blocks {
                        s.spawn(move |_| f(block));
                    }
                });
            }
        }
    }

    fn sum_over_words<F>(&self, words: usize, f: F) -> i64
    where
        F: Fn(Range<usize>) -> i64 + Sync + Send,
    {
        match &self.pool {
            Some(pool) if words >= PARALLEL_WORDS => {
                let step = words.div_ceil(self.workers);
                pool.install(|| {
                    (0..self.workers)
                        .into_par_iter()
                        .map(|k| f((k * step).min(words)..((k + 1) * step).min(words)))
                        .sum()
                })
            }
            _ => f(0..words),
        }
    }
}

struct Run<'a> {
    tableau: Tableau,
    record: MeasurementRecord,
    workers: &'a Workers,
    cfg: EngineConfig,
}

impl<'a> Run<'a> {
    fn new(c: &Circuit, cfg: EngineConfig, workers: &'a Workers) -> Result<Self> {
        if let Some(g) = c.gates().iter().find(|g| g.is_t_like()) {
            return Err(Error::Unsupported(format!("{g} in stabilizer simulation")));
        }
        Ok(Self {
            tableau: Tableau::new_identity(c.num_qubits())?,
            record: MeasurementRecord::default(),
            workers,
            cfg,
        })
    }

    fn audit(&self) -> Result<()> {
        if self.cfg.audit {
            self.tableau.audit()?;
        }
        Ok(())
    }

    fn step(&mut self, index: usize, gate: Gate) -> Result<()> {
        match gate {
            Gate::Measure(q) => {
                let ordinal = self.record.entries.len() as u64;
                let mut rng = measurement_rng(self.cfg.seed, ordinal);
                let m = self.tableau.measure_z_with(q, &mut rng, self.workers)?;
                self.record.entries.push(MeasurementEntry {
                    gate_index: index,
                    qubit: q,
                    outcome: m.outcome,
                    deterministic: m.deterministic,
                });
            }
            g => self.tableau.apply_gate_with(g, self.workers)?,
        }
        self.audit()
    }
}

/// Gate-by-gate simulation from `|0…0⟩`. Chunk marks are ignored.
pub fn sim(c: &Circuit, cfg: EngineConfig) -> Result<(Tableau, MeasurementRecord)> {
    let workers = Workers::new(cfg.workers)?;
    sim_on(c, cfg, &workers)
}

/// As [`sim`], reusing an existing worker pool.
pub fn sim_on(c: &Circuit, cfg: EngineConfig, workers: &Workers) -> Result<(Tableau, MeasurementRecord)> {
    let mut run = Run::new(c, cfg, workers)?;
    for (i, &g) in c.gates().iter().enumerate() {
        run.step(i, g)?;
    }
    Ok((run.tableau, run.record))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sim2dOutcome {
    pub tableau: Tableau,
    pub record: MeasurementRecord,
    /// Violations of chunks that were run sequentially instead of in parallel.
    pub fallbacks: Vec<ChunkViolation>,
}

/// Chunk-parallel simulation.
///
/// Every chunk that passes [`validate_chunks`] is applied with one pass per
/// row block, in slices of at most `chunk_size_hint` gates (`0` means no
/// limit). Chunks with violations fall back to gate-by-gate execution and
/// are reported in [`Sim2dOutcome::fallbacks`]. The result equals [`sim`]
/// for the same seed.
pub fn sim2d(c: &Circuit, chunk_size_hint: usize, cfg: EngineConfig) -> Result<Sim2dOutcome> {
    let workers = Workers::new(cfg.workers)?;
    sim2d_on(c, chunk_size_hint, cfg, &workers)
}

pub fn sim2d_on(
    c: &Circuit,
    chunk_size_hint: usize,
    cfg: EngineConfig,
    workers: &Workers,
) -> Result<Sim2dOutcome> {
    let violations = validate_chunks(c);
    let mut run = Run::new(c, cfg, workers)?;
    let mut fallbacks = Vec::new();
    for (k, range) in c.chunks().into_iter().enumerate() {
        let bad: Vec<ChunkViolation> = violations.iter().filter(|v| v.chunk == k).copied().collect();
        if !bad.is_empty() {
            fallbacks.extend(bad);
            for i in range {
                run.step(i, c.gates()[i])?;
            }
            continue;
        }
        let gates = &c.gates()[range];
        let step = if chunk_size_hint == 0 {
            gates.len().max(1)
        } else {
            chunk_size_hint
        };
        for slice in gates.chunks(step) {
            run.tableau.apply_layer_with(slice, workers)?;
            run.audit()?;
        }
    }
    Ok(Sim2dOutcome {
        tableau: run.tableau,
        record: run.record,
        fallbacks,
    })
}

/// Outcome counts over repeated runs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Histogram {
    pub shots: u64,
    /// `[count of 0, count of 1]` for each measurement site, in circuit order.
    pub per_site: Vec<[u64; 2]>,
    /// Counts of whole-record bitstrings.
    pub joint: BTreeMap<String, u64>,
}

/// Runs `shots` independent simulations; shot `k` uses seed `cfg.seed ^ k`.
pub fn run_shots(c: &Circuit, shots: u64, cfg: EngineConfig) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::Input("shots must be at least 1".into()));
    }
    let workers = Workers::new(cfg.workers)?;
    let mut hist = Histogram {
        shots,
        per_site: vec![[0, 0]; c.num_measurements()],
        joint: BTreeMap::new(),
    };
    for shot in 0..shots {
        let shot_cfg = EngineConfig {
            seed: cfg.seed ^ shot,
            ..cfg
        };
        let (_, record) = sim_on(c, shot_cfg, &workers)?;
        for (site, e) in hist.per_site.iter_mut().zip(&record.entries) {
            site[usize::from(e.outcome)] += 1;
        }
        *hist.joint.entry(record.bitstring()).or_default() += 1;
    }
    Ok(hist)
}
