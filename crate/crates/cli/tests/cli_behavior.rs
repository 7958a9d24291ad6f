//! CLI contract tests: record schema, exit codes, file outputs, and the
//! record-lookup path of speedup-report.

use std::io::Write;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_speeduplab"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        output.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&output.stdout).into_owned(),
        String::from_utf8_lossy(&output.stderr).into_owned(),
    )
}

#[test]
fn record_schema_is_stable() {
    let (code, out, _) = run(&[
        "ground-energy", "classical", "--d", "1", "--m", "7", "--potential", "sep-sin",
    ]);
    assert_eq!(code, 0);
    let record: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    for key in [
        "run_id",
        "command",
        "params",
        "estimate",
        "reference",
        "oracle_calls",
        "quantum_queries",
        "qubits",
        "wall_ms",
        "seed",
    ] {
        assert!(record.get(key).is_some(), "missing key {key} in {record}");
    }
    assert_eq!(record["command"], "ground-energy classical");
    assert_eq!(record["oracle_calls"], 7);
    let rel = record["params"]["relative_error"].as_f64().unwrap();
    assert!(rel < 1e-7);
}

#[test]
fn trivial_run_makes_no_calls() {
    let (code, out, _) = run(&["ground-energy", "trivial", "--d", "10", "--eps", "0.2"]);
    assert_eq!(code, 0);
    let record: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(record["oracle_calls"], 0);
    let est = record["estimate"].as_f64().unwrap();
    assert!((est - 99.19604401089359).abs() < 1e-9);
}

#[test]
fn usage_errors_exit_2() {
    // Unknown potential DSL.
    let (code, _, err) = run(&[
        "ground-energy", "classical", "--d", "1", "--m", "3", "--potential", "bogus",
    ]);
    assert_eq!(code, 2, "stderr: {err}");
    // Missing grid size.
    let (code, _, _) = run(&["ground-energy", "classical", "--d", "1"]);
    assert_eq!(code, 2);
    // Trivial outside its applicability region.
    let (code, _, err) = run(&["ground-energy", "trivial", "--d", "2", "--eps", "0.1"]);
    assert_eq!(code, 2);
    assert!(err.contains("eps >= 1/d"), "stderr: {err}");
    // Unknown flags are clap usage errors.
    let (code, _, _) = run(&["ground-energy", "classical", "--bogus"]);
    assert_eq!(code, 2);
}

#[test]
fn capacity_errors_exit_3() {
    let (code, _, err) = run(&[
        "ground-energy", "classical", "--d", "9", "--m", "30", "--potential", "zero",
    ]);
    assert_eq!(code, 3, "stderr: {err}");
    let (code, _, _) = run(&["integrate", "product", "--d", "9", "--f", "one", "--m-per-dim", "10"]);
    assert_eq!(code, 3);
}

#[test]
fn non_convergence_exits_4() {
    let (code, _, err) = run(&[
        "ground-energy", "classical", "--d", "1", "--m", "15", "--potential", "sep-sin",
        "--start", "random", "--max-outer", "1", "--residual-tol", "1e-15",
    ]);
    assert_eq!(code, 4, "stderr: {err}");
    assert!(err.contains("did not converge"), "stderr: {err}");
}

#[test]
fn quantum_dump_dist_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dist.csv");
    let (code, out, _) = run(&[
        "ground-energy", "quantum", "--d", "1", "--m", "3", "--potential", "const:1.0",
        "--phase-bits", "6", "--trotter-steps", "4", "--dump-dist", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let record: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(record["qubits"], 8);
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("outcome_index,probability"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 64);
    let total: f64 = rows
        .iter()
        .map(|r| r.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9);

    // Sampled mode cannot dump a distribution.
    let (code, _, err) = run(&[
        "ground-energy", "quantum", "--d", "1", "--m", "3", "--mode", "sampled",
        "--dump-dist", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("--mode exact"), "stderr: {err}");
}

#[test]
fn tabulated_potential_via_dsl() {
    // A constant-0.5 table must shift the V=0 ground energy by exactly 0.5.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let mut body = String::from("1,7\n");
    for _ in 0..7 {
        body.push_str("0.5\n");
    }
    std::fs::write(&path, body).unwrap();
    let dsl = format!("tab:{}", path.display());
    let (code, out, err) = run(&[
        "ground-energy", "classical", "--d", "1", "--m", "7", "--potential", &dsl,
    ]);
    assert_eq!(code, 0, "stderr: {err}");
    let with_table: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    let (_, out, _) = run(&[
        "ground-energy", "classical", "--d", "1", "--m", "7", "--potential", "zero",
    ]);
    let with_zero: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    let shift = with_table["estimate"].as_f64().unwrap()
        - with_zero["estimate"].as_f64().unwrap();
    assert!((shift - 0.5).abs() < 1e-8, "shift {shift}");

    // Malformed table: value count mismatch.
    std::fs::write(&path, "1,7\n0.5\n0.5\n").unwrap();
    let (code, _, err) = run(&[
        "ground-energy", "classical", "--d", "1", "--m", "7", "--potential", &dsl,
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("expected 7 values"), "stderr: {err}");
}

#[test]
fn mean_boolean_table_and_size_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.txt");
    let mut file = std::fs::File::create(&path).unwrap();
    // 16 entries, mean 1/4 for n = 4.
    writeln!(file, "1111 0000 0000 0000").unwrap();
    drop(file);
    let (code, out, _) = run(&[
        "mean-boolean", "--n", "4", "--function", "table", "--table-file",
        path.to_str().unwrap(), "--m-outcomes", "64",
    ]);
    assert_eq!(code, 0);
    let record: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(record["reference"], 0.25);
    assert_eq!(record["quantum_queries"], 63);

    // Wrong size (n = 5 expects 32 entries).
    let (code, _, err) = run(&[
        "mean-boolean", "--n", "5", "--function", "table", "--table-file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("size mismatch"), "stderr: {err}");
}

#[test]
fn mean_boolean_reports_classical_bound() {
    let (code, out, _) = run(&[
        "mean-boolean", "--n", "10", "--function", "parity", "--m-outcomes", "64",
        "--eps", "0.25",
    ]);
    assert_eq!(code, 0);
    let record: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(record["params"]["classical_lb"], 384.0);
    // Zeros table estimates exactly zero.
    let (_, out, _) = run(&["mean-boolean", "--n", "6", "--function", "zeros"]);
    let record: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(record["estimate"], 0.0);
}

#[test]
fn integrate_records_reference_values() {
    let (code, out, _) = run(&["integrate", "classical-1d", "--f", "sin", "--n-points", "16"]);
    assert_eq!(code, 0);
    let record: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(record["oracle_calls"], 16);
    let reference = record["reference"].as_f64().unwrap();
    assert!((reference - (1.0 - 1f64.cos())).abs() < 1e-12);
    let abs_err = record["params"]["abs_error"].as_f64().unwrap();
    assert!(abs_err <= 1f64.sin() / (24.0 * 256.0));

    let (code, out, _) = run(&[
        "integrate", "quantum-1d", "--f", "x", "--n-points", "128", "--m-outcomes", "64",
    ]);
    assert_eq!(code, 0);
    let record: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(record["quantum_queries"], 63);
    let est = record["estimate"].as_f64().unwrap();
    assert!((est - 0.5).abs() < 1e-9);
}

#[test]
fn speedup_report_lookup_paths() {
    let dir = tempfile::tempdir().unwrap();
    let records_path = dir.path().join("runs.jsonl");

    // Produce two records into the file.
    let classical = Command::new(env!("CARGO_BIN_EXE_speeduplab"))
        .args(["ground-energy", "classical", "--d", "2", "--m", "15", "--potential", "sep-sin"])
        .output()
        .unwrap();
    let quantum = Command::new(env!("CARGO_BIN_EXE_speeduplab"))
        .args([
            "ground-energy", "quantum", "--d", "2", "--m", "7", "--potential", "sep-sin",
            "--phase-bits", "6", "--trotter-steps", "4",
        ])
        .output()
        .unwrap();
    let classical_line = String::from_utf8(classical.stdout).unwrap();
    let quantum_line = String::from_utf8(quantum.stdout).unwrap();
    std::fs::write(
        &records_path,
        format!("{classical_line}{quantum_line}"),
    )
    .unwrap();
    let classical_id = serde_json::from_str::<serde_json::Value>(classical_line.trim()).unwrap()
        ["run_id"]
        .as_str()
        .unwrap()
        .to_string();
    let quantum_id = serde_json::from_str::<serde_json::Value>(quantum_line.trim()).unwrap()
        ["run_id"]
        .as_str()
        .unwrap()
        .to_string();

    let report_path = dir.path().join("report.json");
    let (code, out, err) = run(&[
        "speedup-report", "--d", "2", "--eps", "0.05",
        "--records", records_path.to_str().unwrap(),
        "--classical-run", &classical_id,
        "--quantum-run", &quantum_id,
        "--dump-report", report_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "stderr: {err}");
    let record: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    let report = &record["params"]["report"];
    // classical 225 oracle calls vs 63 * 4 quantum queries.
    let s1 = report["s1_empirical"].as_f64().unwrap();
    assert!((s1 - 225.0 / 252.0).abs() < 1e-12);
    assert_eq!(report["ledgers"].as_array().unwrap().len(), 2);
    let dumped: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(dumped["model"]["d"], 2);

    // Unknown run id is a lookup error.
    let (code, _, err) = run(&[
        "speedup-report", "--d", "2", "--eps", "0.05",
        "--records", records_path.to_str().unwrap(),
        "--classical-run", "nope",
        "--quantum-run", &quantum_id,
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown run id"), "stderr: {err}");
}

#[test]
fn speedup_report_trivial_note_and_regime_flag() {
    let (code, out, _) = run(&["speedup-report", "--d", "4", "--eps", "0.3"]);
    assert_eq!(code, 0);
    let record: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    let report = &record["params"]["report"];
    assert_eq!(report["trivial_algorithm_applicable"], true);
    assert_eq!(report["regime_ok"], false); // d * eps = 1.2 >= 1
    assert!(record["params"]["note"]
        .as_str()
        .unwrap()
        .contains("constant-cost"));

    let (_, out, _) = run(&["speedup-report", "--d", "2", "--eps", "0.05"]);
    let record: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(record["params"]["report"]["regime_ok"], true);
    assert_eq!(
        record["params"]["report"]["trivial_algorithm_applicable"],
        false
    );
}

#[test]
fn invalid_workers_env_is_rejected() {
    let output = Command::new(env!("CARGO_BIN_EXE_speeduplab"))
        .args(["speedup-report", "--d", "2", "--eps", "0.05"])
        .env("SPEEDUPLAB_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}
