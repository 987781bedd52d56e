//! Timed benchmark runs and their CSV output.

use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::engine::{sim2d_on, sim_on, EngineConfig, Workers};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sim,
    Sim2d,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Sim => "sim",
            Mode::Sim2d => "sim2d",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sim" => Ok(Mode::Sim),
            "sim2d" => Ok(Mode::Sim2d),
            other => Err(Error::Input(format!("unknown mode `{other}`, expected sim or sim2d"))),
        }
    }
}

/// One line of benchmark output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub circuit: String,
    pub n: usize,
    pub gates: usize,
    pub measurements: usize,
    pub workers: usize,
    pub mode: Mode,
    pub seed: u64,
    pub wall_time_ms: f64,
    /// Bits allocated for the tableau, padding included.
    pub peak_bits: usize,
}

/// Simulates `c` once and times only the simulation call.
pub fn time_run(name: &str, c: &Circuit, mode: Mode, cfg: EngineConfig, workers: &Workers) -> Result<BenchRow> {
    let start = Instant::now();
    let tableau = match mode {
        Mode::Sim => sim_on(c, cfg, workers)?.0,
        Mode::Sim2d => sim2d_on(c, 0, cfg, workers)?.tableau,
    };
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(BenchRow {
        circuit: name.to_string(),
        n: c.num_qubits(),
        gates: c.len(),
        measurements: c.num_measurements(),
        workers: workers.count(),
        mode,
        seed: cfg.seed,
        wall_time_ms,
        peak_bits: tableau.allocated_bits(),
    })
}

/// Writes rows as CSV with a header line.
pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Output(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Output(e.to_string()))
}

pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<BenchRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| Error::Input(e.to_string()))
}

/// Peak resident set size of this process in bytes, where the platform
/// reports it.
pub fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kib: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kib * 1024)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qec::random_layered_circuit;

    #[test]
    fn csv_schema() {
        let c = random_layered_circuit(8, 1).unwrap();
        let workers = Workers::new(1).unwrap();
        let mut row = time_run("random", &c, Mode::Sim, EngineConfig::new(1, 5), &workers).unwrap();
        assert_eq!((row.n, row.gates, row.measurements), (8, 27, 3));
        row.wall_time_ms = 1.5;
        let mut buf = Vec::new();
        write_csv(std::slice::from_ref(&row), &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("circuit,n,gates,measurements,workers,mode,seed,wall_time_ms,peak_bits")
        );
        assert_eq!(lines.next(), Some(format!("random,8,27,3,1,sim,5,1.5,{}", row.peak_bits).as_str()));
        assert_eq!(read_csv(&buf[..]).unwrap(), vec![row]);
    }

    #[test]
    fn modes_parse() {
        assert_eq!("sim2d".parse::<Mode>().unwrap(), Mode::Sim2d);
        assert!("gpu".parse::<Mode>().is_err());
        assert_eq!(Mode::Sim.to_string(), "sim");
    }
}
