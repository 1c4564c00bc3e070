//! Artifact rendering: config-stamped CSV, JSON, and gnuplot companions.
//!
//! Every file starts with (or embeds) the full parsed configuration so a
//! result can be traced back to the exact invocation; nothing time- or
//! host-dependent is written, which keeps reruns byte-identical.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::CliError;

/// Full double-precision round trip: 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// A rectangular result set; `None` cells render as empty fields.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Option<f64>>>,
}

/// One-line invocation record placed in every artifact.
pub fn config_line<A: Serialize>(subcommand: &str, args: &A) -> String {
    let flags = serde_json::to_string(args).expect("config serializes");
    format!("thermobound {subcommand} {flags}")
}

pub fn render_csv(config: &str, table: &Table) -> String {
    let mut s = String::new();
    s.push_str("# ");
    s.push_str(config);
    s.push('\n');
    s.push_str(&table.columns.join(","));
    s.push('\n');
    for row in &table.rows {
        let mut first = true;
        for cell in row {
            if !first {
                s.push(',');
            }
            if let Some(x) = cell {
                s.push_str(&fmt17(*x));
            }
            first = false;
        }
        s.push('\n');
    }
    s
}

pub fn render_json<A: Serialize>(
    subcommand: &str,
    args: &A,
    table: &Table,
    extra: Map<String, Value>,
) -> String {
    let mut root = Map::new();
    root.insert(
        "config".into(),
        json!({
            "subcommand": subcommand,
            "args": serde_json::to_value(args).expect("config serializes"),
        }),
    );
    for (k, v) in extra {
        root.insert(k, v);
    }
    root.insert("columns".into(), json!(table.columns));
    root.insert(
        "rows".into(),
        Value::Array(
            table
                .rows
                .iter()
                .map(|r| Value::Array(r.iter().map(|c| json!(c)).collect()))
                .collect(),
        ),
    );
    let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("json renders");
    s.push('\n');
    s
}

/// Write to the given path, or to stdout when no path was requested.
pub fn write_artifact(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Companion gnuplot script plotting lower/exact/upper against the sweep
/// columns; `n_sweep` is 1 for line plots and 2 for surface grids.
pub fn write_gnuplot(csv: &Path, n_sweep: usize, columns: &[&str]) -> Result<PathBuf, CliError> {
    let script_path = csv.with_extension("gp");
    let csv_name = csv
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| csv.display().to_string());
    let mut s = String::new();
    s.push_str("# companion plot script; run: gnuplot ");
    s.push_str(&script_path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default());
    s.push('\n');
    s.push_str("set datafile separator ','\nset key autotitle columnhead\nset key left top\n");
    s.push_str(&format!("set xlabel '{}'\n", columns[0]));
    if n_sweep == 1 {
        s.push_str(&format!(
            "plot '{csv_name}' using 1:2 with lines, '' using 1:3 with lines, '' using 1:4 with lines\n"
        ));
    } else {
        s.push_str(&format!("set ylabel '{}'\n", columns[1]));
        s.push_str(&format!(
            "splot '{csv_name}' using 1:2:3 with points, '' using 1:2:4 with points, '' using 1:2:5 with points\n"
        ));
    }
    fs::write(&script_path, s).map_err(|source| CliError::Io {
        path: script_path.clone(),
        source,
    })?;
    Ok(script_path)
}
