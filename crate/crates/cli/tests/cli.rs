//! End-to-end checks of the installed binary: artifact layout, exit codes,
//! reproducibility, and agreement between output routes.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_thermobound"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

/// Split a CSV artifact into (config line, column names, numeric rows).
fn parse_csv(text: &str) -> (String, Vec<String>, Vec<Vec<Option<f64>>>) {
    let mut lines = text.lines();
    let config = lines.next().expect("config line").to_string();
    assert!(config.starts_with("# thermobound "), "header records the config: {config}");
    let header = lines.next().expect("column line");
    let columns: Vec<String> = header.split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|c| {
                    if c.is_empty() {
                        None
                    } else {
                        Some(c.parse::<f64>().expect("numeric cell"))
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    (config, columns, rows)
}

fn write_spec(dir: &Path, name: &str, json: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(json).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn qubit_spec(hz: f64, hx: f64, t: f64) -> Value {
    serde_json::json!({
        "H": {"dim": 2, "re": [[hz, hx], [hx, -hz]], "im": [[0.0, 0.0], [0.0, 0.0]]},
        "T": t,
    })
}

#[test]
fn generic_identical_specs_give_a_zero_row() {
    let dir = tempfile::tempdir().unwrap();
    let s = write_spec(dir.path(), "s.json", &qubit_spec(1.0, 0.3, 2.0));
    let out = stdout_of(&run(&["generic", "--s1", &s, "--s2", &s]));
    let (_, columns, rows) = parse_csv(&out);
    assert_eq!(columns, ["lower", "exact", "upper", "slack_lower", "slack_upper"]);
    assert_eq!(rows.len(), 1);
    for cell in &rows[0] {
        assert_eq!(cell.unwrap(), 0.0);
    }
}

#[test]
fn generic_row_is_ordered_and_slacks_close_the_gap() {
    let dir = tempfile::tempdir().unwrap();
    let s1 = write_spec(dir.path(), "s1.json", &qubit_spec(1.0, 0.3, 2.0));
    let s2 = write_spec(dir.path(), "s2.json", &qubit_spec(0.4, -0.9, 5.0));
    let out = stdout_of(&run(&["generic", "--s1", &s1, "--s2", &s2]));
    let (_, _, rows) = parse_csv(&out);
    let r = &rows[0];
    let (lower, exact, upper) = (r[0].unwrap(), r[1].unwrap(), r[2].unwrap());
    let (sl, su) = (r[3].unwrap(), r[4].unwrap());
    assert!(lower <= exact && exact <= upper);
    assert!(sl >= 0.0 && su >= 0.0);
    assert!((exact - lower - sl).abs() < 1e-12);
    assert!((upper - exact - su).abs() < 1e-12);
}

#[test]
fn generic_json_echo_feeds_back_to_the_same_row() {
    let dir = tempfile::tempdir().unwrap();
    let s1 = write_spec(dir.path(), "s1.json", &qubit_spec(1.0, 0.3, 2.0));
    let s2 = write_spec(dir.path(), "s2.json", &qubit_spec(0.4, -0.9, 5.0));
    let out = stdout_of(&run(&["generic", "--s1", &s1, "--s2", &s2, "--format", "json"]));
    let v: Value = serde_json::from_str(&out).unwrap();
    let first_rows = v["rows"].clone();

    // The artifact embeds the parsed specs; writing them back out and
    // rerunning must reproduce the numbers exactly.
    let s1_echo = write_spec(dir.path(), "s1_echo.json", &v["s1"]);
    let s2_echo = write_spec(dir.path(), "s2_echo.json", &v["s2"]);
    let out2 = stdout_of(&run(&[
        "generic", "--s1", &s1_echo, "--s2", &s2_echo, "--format", "json",
    ]));
    let v2: Value = serde_json::from_str(&out2).unwrap();
    assert_eq!(first_rows, v2["rows"]);
}

#[test]
fn generic_detects_grand_specs_and_rejects_mixing() {
    let dir = tempfile::tempdir().unwrap();
    let grand = serde_json::json!({
        "H": {"dim": 2, "re": [[1.0, 0.2], [0.2, -1.0]], "im": [[0.0, 0.0], [0.0, 0.0]]},
        "N": {"dim": 2, "re": [[1.0, 0.0], [0.0, 0.0]], "im": [[0.0, 0.0], [0.0, 0.0]]},
        "T": 2.0,
        "mu": 0.5,
    });
    let g = write_spec(dir.path(), "g.json", &grand);
    let s = write_spec(dir.path(), "s.json", &qubit_spec(1.0, 0.2, 2.0));

    let out = stdout_of(&run(&["generic", "--s1", &g, "--s2", &g]));
    let (_, _, rows) = parse_csv(&out);
    assert_eq!(rows[0][1].unwrap(), 0.0);

    let mixed = run(&["generic", "--s1", &g, "--s2", &s]);
    assert_eq!(mixed.status.code(), Some(3));
}

#[test]
fn rerunning_a_config_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sweep.csv");
    let args = [
        "qubit-sweep", "--hnorm", "7.81", "--gnorm", "4.12", "--T1", "10", "--T2", "15",
        "--sweep", "theta", "--out", out_path.to_str().unwrap(),
    ];
    assert!(run(&args).status.success());
    let first = std::fs::read(&out_path).unwrap();
    assert!(run(&args).status.success());
    let second = std::fs::read(&out_path).unwrap();
    assert_eq!(first, second);
}

#[test]
fn qubit_theta_sweep_has_the_documented_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("fig.csv");
    assert!(run(&[
        "qubit-sweep", "--hnorm", "7.81", "--gnorm", "4.12", "--T1", "10", "--T2", "15",
        "--sweep", "theta", "--out", out_path.to_str().unwrap(),
    ])
    .status
    .success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let (_, columns, rows) = parse_csv(&text);
    assert_eq!(columns, ["theta", "lower", "exact", "upper"]);
    assert_eq!(rows.len(), 200);
    assert_eq!(rows[0][0].unwrap(), 0.0);

    // Aligned fields maximize the lower bound; the exact value is
    // angle-independent and stays inside the band everywhere.
    let lower0 = rows[0][1].unwrap();
    for r in &rows {
        assert!(r[1].unwrap() <= lower0 + 1e-15);
        assert!(r[1].unwrap() <= r[2].unwrap() && r[2].unwrap() <= r[3].unwrap());
        assert!((r[2].unwrap() - rows[0][2].unwrap()).abs() < 1e-12);
    }
}

#[test]
fn csv_cells_carry_seventeen_significant_digits() {
    let dir = tempfile::tempdir().unwrap();
    let s = write_spec(dir.path(), "s.json", &qubit_spec(1.0, 0.3, 2.0));
    let s2 = write_spec(dir.path(), "s2.json", &qubit_spec(0.4, -0.9, 5.0));
    let out = stdout_of(&run(&["generic", "--s1", &s, "--s2", &s2]));
    let data_line = out.lines().nth(2).unwrap();
    for cell in data_line.split(',') {
        let mantissa = cell.split('e').next().unwrap();
        let digits = mantissa.chars().filter(char::is_ascii_digit).count();
        assert_eq!(digits, 17, "cell {cell} should carry 17 significant digits");
    }
}

#[test]
fn oracle_prints_matching_closed_and_truncated_values() {
    let out = stdout_of(&run(&[
        "oracle", "--omega-t", "1.732", "--omega-tp", "1.414", "--T", "2.5", "--N", "400",
    ]));
    let mut closed = None;
    let mut oracle = None;
    let mut delta = None;
    for line in out.lines() {
        let (key, value) = line.split_once(' ').unwrap();
        let value: f64 = value.parse().unwrap();
        match key {
            "closed" => closed = Some(value),
            "oracle" => oracle = Some(value),
            "delta" => delta = Some(value),
            other => panic!("unexpected key {other}"),
        }
    }
    let (closed, oracle, delta) = (closed.unwrap(), oracle.unwrap(), delta.unwrap());
    assert!((closed - oracle).abs() < 1e-6);
    assert!((delta - (closed - oracle).abs()).abs() < 1e-18);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["generic", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-subcommand"]).status.code(), Some(2));
}

#[test]
fn invalid_input_exits_3() {
    let out = run(&[
        "qubit-sweep", "--hnorm", "1", "--gnorm", "1", "--T1", "-5", "--T2", "5",
        "--sweep", "theta",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("temperature"), "stderr names the bad parameter: {err}");

    let missing = run(&["generic", "--s1", "/no/such/file.json", "--s2", "/no/such/file.json"]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn numerical_failure_exits_4() {
    // A loose solver tolerance over a long unstable window lets the conserved
    // Wronskian drift past its budget, which is an internal failure, not an
    // input error.
    let out = run(&[
        "osc-invariant", "--profile", "paul_trap", "--eta", "0.5", "--Omega", "2",
        "--tgrid", "0:200:3", "--tpgrid", "0:200:3", "--T1", "5", "--T2", "5",
        "--tol", "1e-4",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Wronskian"), "stderr explains the failure: {err}");
}

#[test]
fn fc_identity_overlap_same_system_gives_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let levels = dir.path().join("levels.txt");
    std::fs::write(&levels, "0.5\n1.5\n2.5\n").unwrap();
    let overlap = dir.path().join("overlap.txt");
    std::fs::write(&overlap, "1,0,0\n0,1,0\n0,0,1\n").unwrap();
    let out = stdout_of(&run(&[
        "fc", "--levels1", levels.to_str().unwrap(), "--levels2", levels.to_str().unwrap(),
        "--overlap", overlap.to_str().unwrap(), "--T1", "2", "--T2", "2",
    ]));
    let (_, _, rows) = parse_csv(&out);
    for cell in &rows[0] {
        assert!(cell.unwrap().abs() < 1e-14);
    }
}

#[test]
fn worker_count_does_not_change_the_rows() {
    let dir = tempfile::tempdir().unwrap();
    let serial = dir.path().join("serial.csv");
    let pooled = dir.path().join("pooled.csv");
    for (path, workers) in [(&serial, "1"), (&pooled, "4")] {
        assert!(run(&[
            "osc-invariant", "--t", "5", "--tprime", "10", "--T1grid", "5:20:15",
            "--T2grid", "5:20:15", "--workers", workers, "--out", path.to_str().unwrap(),
        ])
        .status
        .success());
    }
    let strip = |p: &Path| {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .skip(1)
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&serial), strip(&pooled));
}

#[test]
fn gnuplot_companion_references_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trap.csv");
    assert!(run(&[
        "paul-trap", "--eta", "0.5", "--Omega", "2", "--t", "0.1", "--T1", "10", "--T2", "10",
        "--steps", "50", "--out", csv.to_str().unwrap(), "--gnuplot",
    ])
    .status
    .success());
    let script = std::fs::read_to_string(dir.path().join("trap.gp")).unwrap();
    assert!(script.contains("'trap.csv'"));
    assert!(script.contains("set datafile separator ','"));

    // The companion is refused when there is no CSV to point at.
    let refused = run(&[
        "paul-trap", "--eta", "0.5", "--Omega", "2", "--t", "0.1", "--T1", "10", "--T2", "10",
        "--gnuplot",
    ]);
    assert_eq!(refused.status.code(), Some(3));
}

#[test]
fn sweep_check_passes_and_reports() {
    let out = run(&["sweep-check", "--pairs", "25", "--grand-pairs", "10", "--seed", "11"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("25 canonical pairs"));
    assert!(text.contains("10 grand pairs"));
}

#[test]
fn paul_trap_exact_peaks_with_the_frequency() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trap.csv");
    assert!(run(&[
        "paul-trap", "--eta", "0.5", "--Omega", "2", "--t", "0.1", "--T1", "10", "--T2", "10",
        "--out", csv.to_str().unwrap(),
    ])
    .status
    .success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let (_, columns, rows) = parse_csv(&text);
    assert_eq!(
        columns,
        ["tprime", "lower", "exact", "upper", "omega_t", "omega_tprime"]
    );
    assert_eq!(rows.len(), 400);

    // Entropy decreases with frequency at fixed temperature, so the exact
    // difference is smallest where omega(t') is largest.
    let argmin_exact = (0..rows.len())
        .min_by(|a, b| rows[*a][2].unwrap().partial_cmp(&rows[*b][2].unwrap()).unwrap())
        .unwrap();
    let omega_max = rows.iter().map(|r| r[5].unwrap()).fold(f64::NEG_INFINITY, f64::max);
    let near_peak = (0..rows.len())
        .filter(|i| rows[*i][5].unwrap() > omega_max - 1e-12)
        .map(|i| i.abs_diff(argmin_exact))
        .min()
        .unwrap();
    assert!(near_peak <= 1, "exact minimum sits {near_peak} steps from the frequency peak");
}
