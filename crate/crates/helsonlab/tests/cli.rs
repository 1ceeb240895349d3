//! End-to-end tests of the installed binary: exit codes, report shapes,
//! determinism, config-file merging, and file round-trips.

use std::path::PathBuf;
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_helsonlab"))
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("helsonlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir.join(name)
}

#[test]
fn bounds_reports_the_q1_constant() {
    let output = run(&["bounds", "--q", "1"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,branch,x_q,bound"));
    let row = lines.next().expect("data row");
    let cells: Vec<&str> = row.split(',').collect();
    assert_eq!(cells[1], "below2");
    let bound: f64 = cells[3].parse().unwrap();
    let exact = (3.0 / 35.0) * (4.0 * 11f64.sqrt() - 1.0);
    assert!((bound - exact).abs() <= 1e-9);
}

#[test]
fn q_two_yields_error_rows_and_partial_exit() {
    let output = run(&["bounds", "--q", "1,2,3"]);
    assert_eq!(output.status.code(), Some(2));
    let text = stdout(&output);
    assert!(text.contains("2.00000000000e0,error,,"));
    assert_eq!(text.lines().count(), 4);

    // Nothing solvable at all is a failure, not a partial report.
    let output = run(&["bounds", "--q", "2"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let args = ["blowup", "--q", "1,3", "--alpha", "1.5", "--beta", "2", "--n-max", "6", "--mode", "product"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());

    let first = run(&["verify", "--seed", "9"]);
    let second = run(&["verify", "--seed", "9"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn project_round_trips_and_is_idempotent() {
    let input = scratch("hankel-input.txt");
    std::fs::write(&input, "matrix 3 3 0\n0 0 1 0\n1 1 0.5 0\n").unwrap();
    let symbol_path = scratch("hankel-input.symbol");
    let matrix_path = scratch("hankel-input.projected");
    let output = run(&[
        "project",
        "--input",
        input.to_str().unwrap(),
        "--weight",
        "uniform",
        "--q",
        "1,2,inf",
        "--output-symbol",
        symbol_path.to_str().unwrap(),
        "--output-matrix",
        matrix_path.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let report = stdout(&output);
    assert_eq!(report.lines().next(), Some("q,input_norm,projected_norm"));
    assert_eq!(report.lines().count(), 4);
    assert!(report.lines().nth(3).unwrap().starts_with("inf,"));

    // Uniform averaging of the A-shaped input gives the symbol {0 -> 1, 2 -> t/3}.
    let symbol = std::fs::read_to_string(&symbol_path).unwrap();
    let mut lines = symbol.lines();
    assert_eq!(lines.next(), Some("symbol additive"));
    assert_eq!(lines.next(), Some("0 1e0 0e0"));
    let gamma2 = lines.next().expect("index 2 entry");
    let cells: Vec<&str> = gamma2.split_whitespace().collect();
    assert_eq!(cells[0], "2");
    let value: f64 = cells[1].parse().unwrap();
    assert!((value - 0.5 / 3.0).abs() < 1e-15);

    // Projecting the already-projected matrix reproduces the same symbol.
    // Byte-for-byte equality holds because these weighted sums round exactly;
    // for generic values re-averaging a constant anti-diagonal drifts by ~1 ulp
    // per entry (the library-level idempotence contract is 1e-12, not bitwise).
    let symbol_again = scratch("hankel-second.symbol");
    let output = run(&[
        "project",
        "--input",
        matrix_path.to_str().unwrap(),
        "--weight",
        "uniform",
        "--q",
        "1",
        "--output-symbol",
        symbol_again.to_str().unwrap(),
        "--output-matrix",
        scratch("hankel-second.projected").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&symbol_again).unwrap(), symbol);
}

#[test]
fn project_handles_multiplicative_matrices() {
    let input = scratch("helson-input.txt");
    // Full 6x6 Helson truncation of {1 -> 1, 6 -> 0.25}.
    let mut text = String::from("matrix 6 6 1\n");
    for m in 1..=6u64 {
        for n in 1..=6u64 {
            match m * n {
                1 => text.push_str(&format!("{m} {n} 1 0\n")),
                6 => text.push_str(&format!("{m} {n} 0.25 0\n")),
                _ => {}
            }
        }
    }
    std::fs::write(&input, text).unwrap();
    let symbol_path = scratch("helson-input.symbol");
    let output = run(&[
        "project",
        "--input",
        input.to_str().unwrap(),
        "--weight",
        "alpha_beta:1,1",
        "--q",
        "1",
        "--output-symbol",
        symbol_path.to_str().unwrap(),
        "--output-matrix",
        scratch("helson-input.projected").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let symbol = std::fs::read_to_string(&symbol_path).unwrap();
    assert!(symbol.starts_with("symbol multiplicative\n"));
    assert!(symbol.contains("\n1 1e0 0e0"));
    assert!(symbol.contains("\n6 2.5e-1 0e0"));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let config = scratch("bounds.toml");
    std::fs::write(&config, "q = [3.0]\ntol = 1e-12\n").unwrap();

    let output = run(&["bounds", "--config", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("3.00000000000e0,above2,"));

    let output = run(&["bounds", "--config", config.to_str().unwrap(), "--q", "1"]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("1.00000000000e0,below2,"));
    assert!(!text.contains("above2"));

    let output = run(&["--config", config.to_str().unwrap(), "verify"]);
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn output_flag_writes_the_report_to_a_file() {
    let path = scratch("bounds-report.csv");
    let output = run(&["bounds", "--q", "1.5", "--output", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert!(output.stdout.is_empty());
    let report = std::fs::read_to_string(&path).unwrap();
    assert!(report.starts_with("q,branch,x_q,bound\n"));
    assert!(report.contains("1.50000000000e0,below2,"));
}

#[test]
fn usage_and_config_errors_exit_one() {
    let output = run(&["bounds", "--no-such-flag"]);
    assert_eq!(output.status.code(), Some(1));

    let output = run(&["bounds"]); // no q anywhere
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("--q"));

    let output = run(&["project", "--input", "/definitely/not/here", "--weight", "uniform", "--q", "1"]);
    assert_eq!(output.status.code(), Some(1));

    let config = scratch("bad.toml");
    std::fs::write(&config, "q = [1.0]\nunknown_key = 3\n").unwrap();
    let output = run(&["bounds", "--config", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["bounds", "--help"]).status.code(), Some(0));
}

#[test]
fn direct_mode_marks_skipped_rows_past_the_cap() {
    let output = binary()
        .args(["blowup", "--q", "1", "--alpha", "1", "--beta", "1", "--n-max", "3", "--mode", "direct"])
        .env("HELSONLAB_SIZE_CAP", "20")
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(2));
    let text = stdout(&output);
    // First prime fits (4x4), the next truncations (36, 900) do not.
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(!rows[0].contains("skipped"));
    assert!(rows[1].contains("skipped"));
    assert!(rows[2].contains("skipped"));
}

#[test]
fn verify_reports_parse_as_json() {
    let output = run(&["verify", "--seed", "5"]);
    assert_eq!(output.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).expect("valid JSON");
    assert_eq!(report["seed"], 5);
    assert_eq!(report["failed"], 0);
    let checks = report["checks"].as_array().expect("array");
    assert_eq!(checks.len(), 21);
    for check in checks {
        assert_eq!(check["passed"], true, "failing check: {check}");
        assert!(check["deviation"].is_number());
        assert!(check["cases"].as_u64().unwrap() > 0);
    }
}

#[test]
fn weight_tables_apply_and_mismatches_fail() {
    let table = scratch("weights.txt");
    // Uniform weights on anti-diagonals 0..4, declared up to k = 4.
    let mut text = String::from("weights additive 4\n");
    for k in 0..=4u64 {
        for i in 0..=k {
            text.push_str(&format!("{} {} {}\n", i, k - i, 1.0 / (k + 1) as f64));
        }
    }
    std::fs::write(&table, text).unwrap();

    let input = scratch("table-input.txt");
    std::fs::write(&input, "matrix 3 3 0\n0 0 1 0\n1 1 0.5 0\n").unwrap();
    let symbol_path = scratch("table-input.symbol");
    let spec = format!("table:{}", table.to_str().unwrap());
    let output = run(&[
        "project",
        "--input",
        input.to_str().unwrap(),
        "--weight",
        &spec,
        "--q",
        "1",
        "--output-symbol",
        symbol_path.to_str().unwrap(),
        "--output-matrix",
        scratch("table-input.projected").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let symbol = std::fs::read_to_string(&symbol_path).unwrap();
    assert!(symbol.contains("\n0 1e0 0e0"));

    // A multiplicative input cannot use an additive table.
    let bad_input = scratch("table-helson.txt");
    std::fs::write(&bad_input, "matrix 2 2 1\n1 1 1 0\n").unwrap();
    let output = run(&[
        "project",
        "--input",
        bad_input.to_str().unwrap(),
        "--weight",
        &spec,
        "--q",
        "1",
    ]);
    assert_eq!(output.status.code(), Some(1));
}
