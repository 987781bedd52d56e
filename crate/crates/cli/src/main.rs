//! `stabkit` command-line interface.
//!
//! Exit codes: 0 on success, 1 on runtime failure (including a failed
//! verification), 2 on usage errors.

mod verify;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use stabkit::engine::{run_shots, sim2d_on, sim_on, EngineConfig, Workers};
use stabkit::grouping::{emit_groups, group_greedy, group_stats, parse_hamiltonian, GroupingMode};
use stabkit::pbc::{emit_pbc, transpile_with, verify_transpile, PbcStats, ScanOrder, TranspileReport};
use stabkit::qec::{random_layered_circuit, surface_code_circuit};
use stabkit::timing::{time_run, write_csv, BenchRow, Mode};
use stabkit::{parse_native, parse_qasm2_subset, Circuit, MeasurementRecord};

#[derive(Parser)]
#[command(name = "stabkit", version, about = "Stabilizer simulation, Pauli grouping and Clifford+T transpilation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a Clifford circuit and print its measurement record or a histogram.
    Sim(SimArgs),
    /// Time generated benchmark circuits and print CSV rows.
    #[command(subcommand)]
    Bench(BenchTarget),
    /// Partition a weighted Pauli Hamiltonian into commuting groups.
    Group(GroupArgs),
    /// Convert a Clifford+T circuit into rotation layers and a final measurement.
    Transpile(TranspileArgs),
    /// Differential tests against the dense statevector oracle.
    #[command(subcommand)]
    Verify(VerifyTarget),
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Stab,
    Qasm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Report {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimMode {
    Sim,
    Sim2d,
}

impl From<SimMode> for Mode {
    fn from(m: SimMode) -> Self {
        match m {
            SimMode::Sim => Mode::Sim,
            SimMode::Sim2d => Mode::Sim2d,
        }
    }
}

#[derive(Args)]
struct Engine {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for row-parallel execution.
    #[arg(long, env = "STABKIT_WORKERS", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    workers: u32,
    #[arg(long, value_enum, default_value_t = SimMode::Sim)]
    mode: SimMode,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long)]
    input: PathBuf,
    /// Input format; detected from the extension (.stab, .qasm) by default.
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
    #[command(flatten)]
    engine: Engine,
    /// Repeat the run with per-shot seeds and report outcome counts.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    shots: Option<u64>,
    /// Largest gate slice applied in one pass in sim2d mode (0 = whole chunk).
    #[arg(long, default_value_t = 0)]
    chunk_size: usize,
    /// Check tableau invariants after every operation.
    #[arg(long)]
    audit: bool,
    #[arg(long, value_enum, default_value_t = Report::Json)]
    report: Report,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BenchTarget {
    /// Rotated surface-code syndrome extraction.
    Surface {
        #[arg(long)]
        distance: Option<usize>,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        /// Comma-separated distances; overrides --distance.
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<usize>,
        #[command(flatten)]
        opts: BenchOpts,
    },
    /// Random layered H/S + CX workload.
    Random {
        #[arg(long)]
        qubits: Option<usize>,
        /// Comma-separated qubit counts; overrides --qubits.
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<usize>,
        #[command(flatten)]
        opts: BenchOpts,
    },
}

#[derive(Args)]
struct BenchOpts {
    #[command(flatten)]
    engine: Engine,
    /// Runs per size; the fastest is reported.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    reps: u32,
    #[arg(long, value_enum, default_value_t = Report::Csv)]
    report: Report,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GroupArgs {
    #[arg(long, value_enum)]
    mode: GroupingModeArg,
    #[arg(long)]
    input: PathBuf,
    /// Groups file; standard output by default.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Stats JSON; standard error by default.
    #[arg(long)]
    stats: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupingModeArg {
    Qwc,
    Gc,
}

#[derive(Args)]
struct TranspileArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
    /// PBC file; standard output by default.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Stats JSON; standard error by default.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Compare exact outcome distributions against the dense oracle.
    #[arg(long)]
    verify: bool,
    /// Pack rotations into layers as late as possible instead of as early
    /// as possible.
    #[arg(long)]
    reverse_scan: bool,
}

#[derive(Subcommand)]
enum VerifyTarget {
    /// Tableau measurements against the dense oracle on random Clifford circuits.
    Tableau(VerifyArgs),
    /// Transpiled programs against the source circuit on random Clifford+T circuits.
    Transpile(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=12))]
    max_qubits: u32,
    /// Gates per circuit are drawn from 1..=max-gates.
    #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u32).range(1..))]
    max_gates: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Runtime(e.into())
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sim(a) => sim_cmd(a),
        Command::Bench(t) => bench_cmd(t),
        Command::Group(a) => group_cmd(a),
        Command::Transpile(a) => transpile_cmd(a),
        Command::Verify(t) => verify_cmd(t),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load_circuit(path: &Path, format: Option<InputFormat>) -> CliResult<Circuit> {
    let format = match format {
        Some(f) => f,
        None => match path.extension().and_then(|e| e.to_str()) {
            Some("stab") => InputFormat::Stab,
            Some("qasm") => InputFormat::Qasm,
            _ => {
                return Err(Failure::Usage(format!(
                    "cannot tell the format of {} from its extension; pass --format stab|qasm",
                    path.display()
                )))
            }
        },
    };
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let circuit = match format {
        InputFormat::Stab => parse_native(&text),
        InputFormat::Qasm => parse_qasm2_subset(&text),
    }
    .with_context(|| format!("parsing {}", path.display()))?;
    Ok(circuit)
}

fn write_out(path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn write_stats<T: Serialize>(path: Option<&Path>, stats: &T) -> CliResult {
    let json = serde_json::to_string_pretty(stats)? + "\n";
    match path {
        Some(p) => fs::write(p, json).with_context(|| format!("writing {}", p.display()))?,
        None => eprint!("{json}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct SimReport<'a> {
    mode: Mode,
    seed: u64,
    qubits: usize,
    /// sim2d chunks that ran gate by gate because they failed validation.
    fallback_chunks: usize,
    record: &'a MeasurementRecord,
}

fn sim_cmd(a: SimArgs) -> CliResult {
    if a.report == Report::Csv {
        return Err(Failure::Usage("sim reports are text or json".into()));
    }
    let c = load_circuit(&a.input, a.format)?;
    let cfg = EngineConfig {
        workers: a.engine.workers as usize,
        seed: a.engine.seed,
        audit: a.audit,
    };
    let text = if let Some(shots) = a.shots {
        // every mode yields the same outcomes for a given seed
        let hist = run_shots(&c, shots, cfg)?;
        match a.report {
            Report::Json => serde_json::to_string_pretty(&hist)? + "\n",
            _ => hist.joint.iter().map(|(k, v)| format!("{k} {v}\n")).collect(),
        }
    } else {
        let workers = Workers::new(cfg.workers)?;
        let mode = Mode::from(a.engine.mode);
        let (record, fallback_chunks) = match mode {
            Mode::Sim => (sim_on(&c, cfg, &workers)?.1, 0),
            Mode::Sim2d => {
                let out = sim2d_on(&c, a.chunk_size, cfg, &workers)?;
                let mut chunks: Vec<usize> = out.fallbacks.iter().map(|v| v.chunk).collect();
                chunks.dedup();
                (out.record, chunks.len())
            }
        };
        match a.report {
            Report::Json => {
                let report = SimReport {
                    mode,
                    seed: cfg.seed,
                    qubits: c.num_qubits(),
                    fallback_chunks,
                    record: &record,
                };
                serde_json::to_string_pretty(&report)? + "\n"
            }
            _ => record
                .entries
                .iter()
                .map(|e| {
                    let kind = if e.deterministic { "deterministic" } else { "random" };
                    format!("{} {} {} {kind}\n", e.gate_index, e.qubit, u8::from(e.outcome))
                })
                .collect(),
        }
    };
    write_out(a.output.as_deref(), &text)
}

fn bench_cmd(target: BenchTarget) -> CliResult {
    let (circuits, opts) = match target {
        BenchTarget::Surface {
            distance,
            rounds,
            sweep,
            opts,
        } => {
            let sizes = sizes(distance, sweep, "--distance")?;
            let circuits = sizes
                .into_iter()
                .map(|d| Ok((format!("surface_d{d}_r{rounds}"), surface_code_circuit(d, rounds)?)))
                .collect::<CliResult<Vec<_>>>()?;
            (circuits, opts)
        }
        BenchTarget::Random { qubits, sweep, opts } => {
            let sizes = sizes(qubits, sweep, "--qubits")?;
            let seed = opts.engine.seed;
            let circuits = sizes
                .into_iter()
                .map(|n| Ok((format!("random_n{n}"), random_layered_circuit(n, seed)?)))
                .collect::<CliResult<Vec<_>>>()?;
            (circuits, opts)
        }
    };
    if opts.report == Report::Text {
        return Err(Failure::Usage("bench reports are csv or json".into()));
    }
    let cfg = EngineConfig::new(opts.engine.workers as usize, opts.engine.seed);
    let workers = Workers::new(cfg.workers)?;
    let mode = Mode::from(opts.engine.mode);
    let mut rows: Vec<BenchRow> = Vec::new();
    for (name, c) in &circuits {
        let mut best: Option<BenchRow> = None;
        for _ in 0..opts.reps {
            let row = time_run(name, c, mode, cfg, &workers)?;
            if best.as_ref().is_none_or(|b| row.wall_time_ms < b.wall_time_ms) {
                best = Some(row);
            }
        }
        rows.extend(best);
    }
    let text = match opts.report {
        Report::Json => serde_json::to_string_pretty(&rows)? + "\n",
        _ => {
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            String::from_utf8(buf)?
        }
    };
    write_out(opts.output.as_deref(), &text)
}

fn sizes(single: Option<usize>, sweep: Vec<usize>, flag: &str) -> CliResult<Vec<usize>> {
    match (single, sweep.is_empty()) {
        (_, false) => Ok(sweep),
        (Some(s), true) => Ok(vec![s]),
        (None, true) => Err(Failure::Usage(format!("pass {flag} or --sweep"))),
    }
}

fn group_cmd(a: GroupArgs) -> CliResult {
    let text = fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let terms = parse_hamiltonian(&text).with_context(|| format!("parsing {}", a.input.display()))?;
    let mode = match a.mode {
        GroupingModeArg::Qwc => GroupingMode::Qwc,
        GroupingModeArg::Gc => GroupingMode::Gc,
    };
    let grouped = group_greedy(&terms, mode)?;
    write_out(a.output.as_deref(), &emit_groups(&grouped))?;
    write_stats(a.stats.as_deref(), &group_stats(&grouped))
}

#[derive(Serialize)]
struct TranspileStats {
    #[serde(flatten)]
    stats: PbcStats,
    t_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<TranspileReport>,
}

fn transpile_cmd(a: TranspileArgs) -> CliResult {
    let c = load_circuit(&a.input, a.format)?;
    let order = if a.reverse_scan {
        ScanOrder::Reverse
    } else {
        ScanOrder::Forward
    };
    let prog = transpile_with(&c, order)?;
    let verify = a.verify.then(|| verify_transpile(&c, &prog)).transpose()?;
    write_out(a.output.as_deref(), &emit_pbc(&prog))?;
    let failed = verify.as_ref().is_some_and(|r| !r.passed);
    write_stats(
        a.stats.as_deref(),
        &TranspileStats {
            t_ratio: prog.stats.t_ratio(),
            stats: prog.stats,
            verify,
        },
    )?;
    if failed {
        return Err(anyhow::anyhow!("transpiled program does not reproduce the circuit's distribution").into());
    }
    Ok(())
}

fn verify_cmd(target: VerifyTarget) -> CliResult {
    let report = match target {
        VerifyTarget::Tableau(a) => verify::tableau(a.trials, a.max_qubits as usize, a.max_gates as usize, a.seed)?,
        VerifyTarget::Transpile(a) => verify::transpile(a.trials, a.max_qubits as usize, a.max_gates as usize, a.seed)?,
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    if report.failures > 0 {
        return Err(anyhow::anyhow!("{} of {} trials failed", report.failures, report.trials).into());
    }
    Ok(())
}
