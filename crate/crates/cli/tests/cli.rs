use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BELL: &str = "qubits 2\nh 0\ncx 0 1\nm 0\nm 1\n";

fn stabkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stabkit"))
        .args(args)
        .env_remove("STABKIT_WORKERS")
        .output()
        .unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

#[test]
fn bell_histogram_has_only_correlated_outcomes() {
    let dir = TempDir::new().unwrap();
    let bell = write(&dir, "bell.stab", BELL);
    let out = stabkit(&["sim", "--input", s(&bell), "--shots", "1000", "--seed", "7"]);
    assert!(out.status.success());
    let hist: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let joint = hist["joint"].as_object().unwrap();
    assert!(joint.keys().all(|k| k == "00" || k == "11"));
    assert_eq!(joint.values().map(|v| v.as_u64().unwrap()).sum::<u64>(), 1000);
    assert_eq!(hist["shots"], 1000);
}

#[test]
fn sim_record_golden() {
    let dir = TempDir::new().unwrap();
    let bell = write(&dir, "bell.stab", BELL);
    let out = stabkit(&["sim", "--input", s(&bell), "--seed", "7"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), golden("bell_sim.json"));
}

#[test]
fn sim_is_deterministic_across_modes_and_workers() {
    let dir = TempDir::new().unwrap();
    let ghz = write(&dir, "ghz.stab", "qubits 3\nh 0\nchunk\ncx 0 1\nchunk\ncx 1 2\nh 2\nm 0\nm 1\nm 2\n");
    let run = |extra: &[&str]| {
        let mut args = vec!["sim", "--input", s(&ghz), "--seed", "3", "--report", "text"];
        args.extend_from_slice(extra);
        let o = stabkit(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        stdout(&o)
    };
    let reference = run(&[]);
    assert_eq!(reference.lines().count(), 3);
    assert_eq!(run(&[]), reference);
    assert_eq!(run(&["--workers", "4"]), reference);
    assert_eq!(run(&["--mode", "sim2d", "--workers", "2"]), reference);
}

#[test]
fn qasm_input_is_detected() {
    let dir = TempDir::new().unwrap();
    let qasm = write(
        &dir,
        "bell.qasm",
        "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[2];\nh q[0];\ncx q[0],q[1];\nmeasure q -> c;\n",
    );
    let out = stabkit(&["sim", "--input", s(&qasm), "--shots", "200"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let hist: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(hist["joint"].as_object().unwrap().keys().all(|k| k == "00" || k == "11"));
}

#[test]
fn transpile_tt_absorbs_into_measurement() {
    let dir = TempDir::new().unwrap();
    let tt = write(&dir, "tt.stab", "qubits 1\nt 0\nt 0\nm 0\n");
    let stats = dir.path().join("stats.json");
    let out = stabkit(&["transpile", "--input", s(&tt), "--verify", "--stats", s(&stats)]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "PBC v1\nqubits 1\nt_initial 2\nt_final 0\nmeasure:\n+Z\n");
    let stats: Value = serde_json::from_str(&fs::read_to_string(stats).unwrap()).unwrap();
    assert_eq!(stats["final_rotations_rowcount"], 0);
    assert_eq!(stats["initial_t"], 2);
    assert_eq!(stats["verify"]["passed"], true);
}

#[test]
fn transpile_stats_golden() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c.stab", "qubits 2\nh 0\nt 0\ncx 0 1\nt 1\nt 1\nh 0\nt 0\nm 0\nm 1\n");
    let pbc = dir.path().join("out.pbc");
    let stats = dir.path().join("stats.json");
    let out = stabkit(&["transpile", "--input", s(&c), "--output", s(&pbc), "--stats", s(&stats)]);
    assert!(out.status.success());
    assert_eq!(fs::read_to_string(stats).unwrap(), golden("transpile_stats.json"));
    assert_eq!(fs::read_to_string(pbc).unwrap(), golden("transpile.pbc"));
}

#[test]
fn bench_sweep_emits_one_row_per_distance() {
    let out = stabkit(&["bench", "surface", "--sweep", "3,5,7,9"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("circuit,n,gates,measurements,workers,mode,seed,wall_time_ms,peak_bits")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    let qubits: Vec<&str> = rows.iter().map(|r| r[1]).collect();
    assert_eq!(qubits, ["17", "49", "97", "161"]);
    assert_eq!(rows[0][0], "surface_d3_r1");
    assert_eq!(rows[0][3], "8");
}

#[test]
fn bench_random_json() {
    let out = stabkit(&["bench", "random", "--qubits", "16", "--seed", "4", "--report", "json", "--workers", "2"]);
    assert!(out.status.success());
    let rows: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let row = &rows[0];
    assert_eq!(row["circuit"], "random_n16");
    assert_eq!(row["workers"], 2);
    assert_eq!(row["mode"], "sim");
    assert_eq!(row["seed"], 4);
}

#[test]
fn group_outputs_and_stats_golden() {
    let dir = TempDir::new().unwrap();
    let ham = write(&dir, "h.ham", "0.5 ZZ\n-0.3 XX\n0.2 ZI\n0.1 IX\n");
    let groups = dir.path().join("groups.txt");
    let stats = dir.path().join("stats.json");
    for (mode, want_groups, want_stats) in [
        ("qwc", "groups_qwc.txt", "groups_qwc.json"),
        ("gc", "groups_gc.txt", "groups_gc.json"),
    ] {
        let out = stabkit(&[
            "group", "--mode", mode, "--input", s(&ham), "--output", s(&groups), "--stats", s(&stats),
        ]);
        assert!(out.status.success());
        assert_eq!(fs::read_to_string(&groups).unwrap(), golden(want_groups));
        assert_eq!(fs::read_to_string(&stats).unwrap(), golden(want_stats));
    }
}

#[test]
fn verify_subcommands_pass() {
    for kind in ["tableau", "transpile"] {
        let out = stabkit(&["verify", kind, "--trials", "40", "--max-qubits", "5", "--seed", "2"]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(report["failures"], 0);
        assert_eq!(report["trials"], 40);
        assert_eq!(report["kind"], kind);
    }
}

#[test]
fn usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let odd = write(&dir, "bell.txt", BELL);
    let bell = write(&dir, "bell.stab", BELL);
    assert_eq!(stabkit(&[]).status.code(), Some(2));
    assert_eq!(stabkit(&["sim", "--input", s(&odd)]).status.code(), Some(2));
    assert_eq!(stabkit(&["sim", "--input", s(&bell), "--workers", "0"]).status.code(), Some(2));
    assert_eq!(stabkit(&["sim", "--input", s(&bell), "--report", "csv"]).status.code(), Some(2));
    assert_eq!(stabkit(&["verify", "tableau", "--max-qubits", "13"]).status.code(), Some(2));
    assert_eq!(stabkit(&["bench", "surface"]).status.code(), Some(2));
    assert_eq!(stabkit(&["group", "--mode", "xyz", "--input", "h.ham"]).status.code(), Some(2));
    let env = Command::new(env!("CARGO_BIN_EXE_stabkit"))
        .args(["sim", "--input", s(&bell)])
        .env("STABKIT_WORKERS", "0")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.stab");
    assert_eq!(stabkit(&["sim", "--input", s(&missing)]).status.code(), Some(1));
    let bad = write(&dir, "bad.stab", "qubits 2\nfoo 0\n");
    let out = stabkit(&["sim", "--input", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let t = write(&dir, "t.stab", "qubits 1\nt 0\nm 0\n");
    assert_eq!(stabkit(&["sim", "--input", s(&t)]).status.code(), Some(1));
    let mid = write(&dir, "mid.stab", "qubits 1\nm 0\nt 0\n");
    assert_eq!(stabkit(&["transpile", "--input", s(&mid)]).status.code(), Some(1));
    assert_eq!(stabkit(&["bench", "surface", "--distance", "4"]).status.code(), Some(1));
}

#[test]
fn workers_env_var_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_stabkit"))
        .args(["bench", "random", "--qubits", "8", "--report", "json"])
        .env("STABKIT_WORKERS", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    let rows: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows[0]["workers"], 3);
}
