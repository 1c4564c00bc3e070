//! `thermobound`: entropy and free-energy difference bounds for thermal
//! states, from the command line.
//!
//! Exit codes: 0 success, 2 usage, 3 invalid input, 4 numerical failure.
//! Set `THERMOBOUND_LOG={error,warn,info,debug}` for diagnostics on stderr.

mod grids;
mod output;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use thermobound::franck_condon::{delta_s_bounds_fc, helmholtz_bounds_fc, OverlapMatrix, SpectralSystem};
use thermobound::oscillator::{
    cross_mean_frequencies, delta_s_bounds_invariant, delta_s_bounds_physical,
    fock_oracle_frequencies, solve_classical, ClassicalSolution, FrequencyProfile, DEFAULT_TOL,
};
use thermobound::qubit::bounds_from_polar;
use thermobound::sampling::{random_grand_spec, random_thermal_spec};
use thermobound::thermal::{
    delta_s_bounds, grand_delta_s_bounds, grand_entropy_gap, grand_gibbs_state,
    grand_log_z_ratio_bounds, helmholtz_bounds, log_z_ratio_bounds,
};
use thermobound::{BoundsResult, GrandThermalSpec, ThermalSpec};

use grids::{linspace, pool_map, GridSpec};
use output::{config_line, fmt17, render_csv, render_json, write_artifact, write_gnuplot, Table};

// ---------------------------------------------------------------------------
// Errors and exit codes

#[derive(Debug)]
pub enum CliError {
    Core(thermobound::Error),
    Io { path: PathBuf, source: std::io::Error },
    Parse { path: PathBuf, what: String },
    Config(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Parse { path, what } => write!(f, "{}: {what}", path.display()),
            CliError::Config(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<thermobound::Error> for CliError {
    fn from(e: thermobound::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 4,
            _ => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) if e.is_numerical() => "numerical",
            _ => "validation",
        }
    }
}

// ---------------------------------------------------------------------------
// Argument surface

#[derive(Parser)]
#[command(
    name = "thermobound",
    version,
    about = "Exact entropy/free-energy differences between thermal states, with two-sided bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound a difference between two JSON spec files (canonical or grand-canonical).
    Generic(GenericArgs),
    /// Two-level-system sweep over the field angle or the first temperature.
    QubitSweep(QubitSweepArgs),
    /// Bounds from two level lists and an overlap-weight matrix.
    Fc(FcArgs),
    /// Instantaneous-Hamiltonian bounds swept along a frequency profile.
    OscPhysical(OscPhysicalArgs),
    /// Trap-profile sweep of the second time at a fixed first time.
    PaulTrap(PaulTrapArgs),
    /// Invariant-family bounds over temperature or time grids.
    OscInvariant(OscInvariantArgs),
    /// Closed two-frequency cross mean vs. the truncated number-basis oracle.
    Oracle(OracleArgs),
    /// Randomized sandwich sweeps; exits nonzero on any violation.
    SweepCheck(SweepCheckArgs),
}

#[derive(Clone, Copy, PartialEq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Family {
    /// Entropy difference S2 - S1.
    DeltaS,
    /// ln Z2 - ln Z1.
    LogZ,
    /// F1/T1 - F2/T2.
    Helmholtz,
}

#[derive(Clone, Copy, PartialEq, ValueEnum, Serialize)]
enum ProfileKind {
    #[value(name = "sqrt_linear", alias = "sqrt-linear")]
    #[serde(rename = "sqrt_linear")]
    SqrtLinear,
    #[value(name = "paul_trap", alias = "paul-trap")]
    #[serde(rename = "paul_trap")]
    PaulTrap,
    #[value(name = "constant")]
    #[serde(rename = "constant")]
    Constant,
}

#[derive(Clone, Copy, PartialEq, ValueEnum, Serialize)]
enum SweepVar {
    #[value(name = "theta")]
    #[serde(rename = "theta")]
    Theta,
    #[value(name = "T1")]
    #[serde(rename = "T1")]
    T1,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct GenericArgs {
    /// First spec: JSON {"H": {dim,re,im}, "T": t}, plus "N" and "mu" for grand-canonical.
    #[arg(long)]
    s1: PathBuf,
    /// Second spec, same schema.
    #[arg(long)]
    s2: PathBuf,
    #[arg(long, value_enum, default_value_t = Family::DeltaS)]
    family: Family,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct QubitSweepArgs {
    /// Identity shift of the first Hamiltonian (does not move the bounds).
    #[arg(long, default_value_t = 0.0)]
    h0: f64,
    #[arg(long, default_value_t = 0.0)]
    hx: f64,
    #[arg(long, default_value_t = 0.0)]
    hy: f64,
    #[arg(long, default_value_t = 0.0)]
    hz: f64,
    /// First field strength; alternative to components.
    #[arg(long, conflicts_with_all = ["hx", "hy", "hz"])]
    hnorm: Option<f64>,
    /// Fixed angle between the fields (T1 sweeps only).
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    g0: f64,
    #[arg(long, default_value_t = 0.0)]
    gx: f64,
    #[arg(long, default_value_t = 0.0)]
    gy: f64,
    #[arg(long, default_value_t = 0.0)]
    gz: f64,
    /// Second field strength; alternative to components.
    #[arg(long, conflicts_with_all = ["gx", "gy", "gz"])]
    gnorm: Option<f64>,
    /// First temperature (fixed for theta sweeps).
    #[arg(long = "T1")]
    t1: Option<f64>,
    #[arg(long = "T2")]
    t2: f64,
    /// What to sweep: theta over [0, pi] or T1 over [1, 30] by default.
    #[arg(long, value_enum)]
    sweep: SweepVar,
    #[arg(long)]
    sweep_min: Option<f64>,
    #[arg(long)]
    sweep_max: Option<f64>,
    #[arg(long, default_value_t = 200)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Emit a companion gnuplot script next to the CSV.
    #[arg(long)]
    gnuplot: bool,
    /// Worker threads for the sweep.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct FcArgs {
    /// Energy levels of system 1, one number per line.
    #[arg(long)]
    levels1: PathBuf,
    /// Energy levels of system 2, one number per line.
    #[arg(long)]
    levels2: PathBuf,
    /// Overlap weights |<u_j|v_l>|^2 as dense CSV rows (j indexes rows).
    #[arg(long)]
    overlap: PathBuf,
    #[arg(long = "T1")]
    t1: f64,
    #[arg(long = "T2")]
    t2: f64,
    #[arg(long, value_enum, default_value_t = Family::DeltaS)]
    family: Family,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct OscPhysicalArgs {
    #[arg(long, value_enum, default_value_t = ProfileKind::SqrtLinear)]
    profile: ProfileKind,
    #[arg(long, default_value_t = 1.0)]
    omega0: f64,
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    /// Trap drive frequency (paul-trap profile only).
    #[arg(long = "Omega", default_value_t = 2.0)]
    drive: f64,
    #[arg(long = "T1")]
    t1: f64,
    #[arg(long = "T2")]
    t2: f64,
    /// Fixed second time t'.
    #[arg(long)]
    tprime: f64,
    #[arg(long, default_value_t = 0.1)]
    tmin: f64,
    #[arg(long, default_value_t = 10.0)]
    tmax: f64,
    #[arg(long, default_value_t = 200)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    gnuplot: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct PaulTrapArgs {
    #[arg(long, default_value_t = 1.0)]
    omega0: f64,
    #[arg(long, default_value_t = 0.5)]
    eta: f64,
    /// Trap drive frequency.
    #[arg(long = "Omega", default_value_t = 2.0)]
    drive: f64,
    /// Fixed first time t.
    #[arg(long)]
    t: f64,
    #[arg(long = "T1")]
    t1: f64,
    #[arg(long = "T2")]
    t2: f64,
    #[arg(long, default_value_t = 0.0)]
    tpmin: f64,
    #[arg(long, default_value_t = 4.0 * std::f64::consts::PI)]
    tpmax: f64,
    #[arg(long, default_value_t = 400)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    gnuplot: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct OscInvariantArgs {
    #[arg(long, value_enum, default_value_t = ProfileKind::SqrtLinear)]
    profile: ProfileKind,
    #[arg(long, default_value_t = 1.0)]
    omega0: f64,
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    #[arg(long = "Omega", default_value_t = 2.0)]
    drive: f64,
    /// Fixed first time (temperature-grid mode).
    #[arg(long)]
    t: Option<f64>,
    /// Fixed second time (temperature-grid mode).
    #[arg(long)]
    tprime: Option<f64>,
    /// Fixed first temperature (time-grid mode).
    #[arg(long = "T1")]
    t1: Option<f64>,
    /// Fixed second temperature (time-grid mode).
    #[arg(long = "T2")]
    t2: Option<f64>,
    /// T1 grid as start:end:count.
    #[arg(long = "T1grid")]
    t1grid: Option<GridSpec>,
    /// T2 grid as start:end:count.
    #[arg(long = "T2grid")]
    t2grid: Option<GridSpec>,
    /// t grid as start:end:count.
    #[arg(long)]
    tgrid: Option<GridSpec>,
    /// t' grid as start:end:count.
    #[arg(long)]
    tpgrid: Option<GridSpec>,
    /// Trajectory solver tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    gnuplot: bool,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct OracleArgs {
    /// Frequency entering the observable.
    #[arg(long = "omega-t")]
    omega_t: f64,
    /// Frequency of the thermal reference.
    #[arg(long = "omega-tp")]
    omega_tp: f64,
    #[arg(long = "T")]
    temperature: f64,
    /// Truncation dimension of the number basis.
    #[arg(long = "N", default_value_t = 400)]
    n: usize,
}

#[derive(Args, Serialize)]
#[command(allow_negative_numbers = true)]
struct SweepCheckArgs {
    /// Random canonical pairs per family.
    #[arg(long, default_value_t = 200)]
    pairs: usize,
    /// Random grand-canonical pairs.
    #[arg(long, default_value_t = 100)]
    grand_pairs: usize,
    #[arg(long, default_value_t = 2)]
    dim_min: usize,
    #[arg(long, default_value_t = 8)]
    dim_max: usize,
    #[arg(long, default_value_t = 0.1)]
    tmin: f64,
    #[arg(long, default_value_t = 100.0)]
    tmax: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

// ---------------------------------------------------------------------------
// Entry

fn main() -> ExitCode {
    env_logger::Builder::from_env(
        env_logger::Env::new().filter_or("THERMOBOUND_LOG", "warn"),
    )
    .format_timestamp(None)
    .init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("thermobound: error[{}]: {e}", e.kind());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Generic(a) => run_generic(a),
        Command::QubitSweep(a) => run_qubit_sweep(a),
        Command::Fc(a) => run_fc(a),
        Command::OscPhysical(a) => run_osc_physical(a),
        Command::PaulTrap(a) => run_paul_trap(a),
        Command::OscInvariant(a) => run_osc_invariant(a),
        Command::Oracle(a) => run_oracle(a),
        Command::SweepCheck(a) => run_sweep_check(a),
    }
}

// ---------------------------------------------------------------------------
// generic

enum SpecKind {
    Canonical(ThermalSpec),
    Grand(GrandThermalSpec),
}

fn load_spec(path: &Path) -> Result<SpecKind, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        what: format!("not valid JSON: {e}"),
    })?;
    let parse = |what: serde_json::Error| CliError::Parse {
        path: path.to_path_buf(),
        what: what.to_string(),
    };
    if value.get("mu").is_some() || value.get("N").is_some() {
        Ok(SpecKind::Grand(serde_json::from_value(value).map_err(parse)?))
    } else {
        Ok(SpecKind::Canonical(serde_json::from_value(value).map_err(parse)?))
    }
}

fn bounds_row(b: &BoundsResult) -> Vec<Option<f64>> {
    vec![Some(b.lower), b.exact, Some(b.upper), b.slack_lower, b.slack_upper]
}

const BOUNDS_COLUMNS: [&str; 5] = ["lower", "exact", "upper", "slack_lower", "slack_upper"];

fn run_generic(a: GenericArgs) -> Result<(), CliError> {
    let k1 = load_spec(&a.s1)?;
    let k2 = load_spec(&a.s2)?;
    let result = match (&k1, &k2) {
        (SpecKind::Canonical(s1), SpecKind::Canonical(s2)) => match a.family {
            Family::DeltaS => delta_s_bounds(s1, s2),
            Family::LogZ => log_z_ratio_bounds(s1, s2),
            Family::Helmholtz => helmholtz_bounds(s1, s2),
        },
        (SpecKind::Grand(g1), SpecKind::Grand(g2)) => match a.family {
            Family::DeltaS => grand_delta_s_bounds(g1, g2),
            Family::LogZ => grand_log_z_ratio_bounds(g1, g2),
            Family::Helmholtz => {
                return Err(CliError::Config(
                    "the helmholtz family is defined for canonical specs only".into(),
                ))
            }
        },
        _ => {
            return Err(CliError::Config(
                "cannot mix a canonical spec with a grand-canonical one".into(),
            ))
        }
    }?;

    let table = Table {
        columns: BOUNDS_COLUMNS.to_vec(),
        rows: vec![bounds_row(&result)],
    };
    let content = match a.format {
        Format::Csv => render_csv(&config_line("generic", &a), &table),
        Format::Json => {
            // Echo the parsed specs so results stay self-contained and the
            // written matrices can be fed straight back in.
            let mut extra = Map::new();
            let spec_value = |k: &SpecKind| match k {
                SpecKind::Canonical(s) => serde_json::to_value(s).expect("spec serializes"),
                SpecKind::Grand(g) => serde_json::to_value(g).expect("spec serializes"),
            };
            extra.insert("s1".into(), spec_value(&k1));
            extra.insert("s2".into(), spec_value(&k2));
            render_json("generic", &a, &table, extra)
        }
    };
    write_artifact(a.out.as_deref(), &content)
}

// ---------------------------------------------------------------------------
// qubit-sweep

fn vector_norm(x: f64, y: f64, z: f64) -> f64 {
    (x * x + y * y + z * z).sqrt()
}

fn run_qubit_sweep(a: QubitSweepArgs) -> Result<(), CliError> {
    let n1 = a.hnorm.unwrap_or_else(|| vector_norm(a.hx, a.hy, a.hz));
    let n2 = a.gnorm.unwrap_or_else(|| vector_norm(a.gx, a.gy, a.gz));
    if a.steps < 2 {
        return Err(CliError::Config("--steps must be at least 2".into()));
    }

    let (sweep_name, rows) = match a.sweep {
        SweepVar::Theta => {
            if a.theta.is_some() {
                return Err(CliError::Config(
                    "--theta conflicts with --sweep theta; the angle is the sweep variable".into(),
                ));
            }
            let t1 = a
                .t1
                .ok_or_else(|| CliError::Config("--T1 is required for a theta sweep".into()))?;
            let thetas = linspace(
                a.sweep_min.unwrap_or(0.0),
                a.sweep_max.unwrap_or(std::f64::consts::PI),
                a.steps,
            );
            let rows = pool_map(a.workers.max(1), &thetas, |theta| {
                let b = bounds_from_polar(n1, n2, theta.cos(), t1, a.t2)?;
                Ok::<_, CliError>(vec![Some(*theta), Some(b.lower), b.exact, Some(b.upper)])
            })?;
            ("theta", rows)
        }
        SweepVar::T1 => {
            if a.t1.is_some() {
                return Err(CliError::Config(
                    "--T1 conflicts with --sweep T1; the temperature is the sweep variable".into(),
                ));
            }
            let cos_theta = match a.theta {
                Some(theta) => theta.cos(),
                None => {
                    // Fall back to the angle between the component forms.
                    if n1 <= 0.0 || n2 <= 0.0 || (a.hnorm.is_some() || a.gnorm.is_some()) {
                        return Err(CliError::Config(
                            "give --theta, or both fields as nonzero components, to fix the angle"
                                .into(),
                        ));
                    }
                    (a.hx * a.gx + a.hy * a.gy + a.hz * a.gz) / (n1 * n2)
                }
            };
            let temps = linspace(
                a.sweep_min.unwrap_or(1.0),
                a.sweep_max.unwrap_or(30.0),
                a.steps,
            );
            let rows = pool_map(a.workers.max(1), &temps, |t1| {
                let b = bounds_from_polar(n1, n2, cos_theta, *t1, a.t2)?;
                Ok::<_, CliError>(vec![Some(*t1), Some(b.lower), b.exact, Some(b.upper)])
            })?;
            ("T1", rows)
        }
    };

    let table = Table {
        columns: vec![sweep_name, "lower", "exact", "upper"],
        rows,
    };
    info!("qubit-sweep: {} rows over {}", table.rows.len(), sweep_name);
    emit_sweep("qubit-sweep", &a, a.format, a.out.as_deref(), a.gnuplot, 1, &table)
}

// ---------------------------------------------------------------------------
// fc

fn parse_levels(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut levels = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        levels.push(line.parse::<f64>().map_err(|_| CliError::Parse {
            path: path.to_path_buf(),
            what: format!("line {}: '{line}' is not a number", i + 1),
        })?);
    }
    if levels.is_empty() {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            what: "no levels found".into(),
        });
    }
    Ok(levels)
}

fn parse_dense_matrix(path: &Path) -> Result<nalgebra::DMatrix<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = if line.contains(',') {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        let mut row = Vec::with_capacity(cells.len());
        for c in cells {
            row.push(c.parse::<f64>().map_err(|_| CliError::Parse {
                path: path.to_path_buf(),
                what: format!("line {}: '{c}' is not a number", i + 1),
            })?);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(CliError::Parse {
                    path: path.to_path_buf(),
                    what: format!(
                        "line {}: expected {} columns, found {}",
                        i + 1,
                        first.len(),
                        row.len()
                    ),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Parse {
            path: path.to_path_buf(),
            what: "no matrix rows found".into(),
        });
    }
    let (nr, nc) = (rows.len(), rows[0].len());
    Ok(nalgebra::DMatrix::from_fn(nr, nc, |i, j| rows[i][j]))
}

fn run_fc(a: FcArgs) -> Result<(), CliError> {
    let sys1 = SpectralSystem::new(parse_levels(&a.levels1)?)?;
    let sys2 = SpectralSystem::new(parse_levels(&a.levels2)?)?;
    let k = OverlapMatrix::detect(parse_dense_matrix(&a.overlap)?)?;
    if k.is_truncated() {
        warn!("overlap matrix is truncated: bounds are reported without the ordering guarantee");
    }
    let result = match a.family {
        Family::DeltaS => delta_s_bounds_fc(&sys1, &sys2, a.t1, a.t2, &k),
        Family::Helmholtz => helmholtz_bounds_fc(&sys1, &sys2, a.t1, a.t2, &k),
        Family::LogZ => {
            return Err(CliError::Config(
                "the overlap route provides delta-s and helmholtz families only".into(),
            ))
        }
    }?;
    let table = Table {
        columns: BOUNDS_COLUMNS.to_vec(),
        rows: vec![bounds_row(&result)],
    };
    let content = match a.format {
        Format::Csv => render_csv(&config_line("fc", &a), &table),
        Format::Json => {
            let mut extra = Map::new();
            extra.insert("validated".into(), json!(result.validated));
            render_json("fc", &a, &table, extra)
        }
    };
    write_artifact(a.out.as_deref(), &content)
}

// ---------------------------------------------------------------------------
// oscillator sweeps

fn build_profile(
    kind: ProfileKind,
    omega0: f64,
    eta: f64,
    drive: f64,
) -> Result<FrequencyProfile, CliError> {
    Ok(match kind {
        ProfileKind::SqrtLinear => FrequencyProfile::sqrt_linear(omega0, eta)?,
        ProfileKind::PaulTrap => FrequencyProfile::paul_trap(omega0, eta, drive)?,
        ProfileKind::Constant => FrequencyProfile::constant(omega0)?,
    })
}

fn run_osc_physical(a: OscPhysicalArgs) -> Result<(), CliError> {
    let profile = build_profile(a.profile, a.omega0, a.eta, a.drive)?;
    let ts = linspace(a.tmin, a.tmax, a.steps);
    let wp = profile.omega(a.tprime)?;
    let rows = pool_map(a.workers.max(1), &ts, |t| {
        let b = delta_s_bounds_physical(&profile, *t, a.tprime, a.t1, a.t2)?;
        Ok::<_, CliError>(vec![
            Some(*t),
            Some(b.lower),
            b.exact,
            Some(b.upper),
            Some(profile.omega(*t)?),
            Some(wp),
        ])
    })?;
    let table = Table {
        columns: vec!["t", "lower", "exact", "upper", "omega_t", "omega_tprime"],
        rows,
    };
    info!("osc-physical: {} rows, {}", table.rows.len(), profile.describe());
    emit_sweep("osc-physical", &a, a.format, a.out.as_deref(), a.gnuplot, 1, &table)
}

fn run_paul_trap(a: PaulTrapArgs) -> Result<(), CliError> {
    let profile = FrequencyProfile::paul_trap(a.omega0, a.eta, a.drive)?;
    let tps = linspace(a.tpmin, a.tpmax, a.steps);
    let w = profile.omega(a.t)?;
    let rows = pool_map(a.workers.max(1), &tps, |tp| {
        let b = delta_s_bounds_physical(&profile, a.t, *tp, a.t1, a.t2)?;
        Ok::<_, CliError>(vec![
            Some(*tp),
            Some(b.lower),
            b.exact,
            Some(b.upper),
            Some(w),
            Some(profile.omega(*tp)?),
        ])
    })?;
    let table = Table {
        columns: vec!["tprime", "lower", "exact", "upper", "omega_t", "omega_tprime"],
        rows,
    };
    info!("paul-trap: {} rows, {}", table.rows.len(), profile.describe());
    emit_sweep("paul-trap", &a, a.format, a.out.as_deref(), a.gnuplot, 1, &table)
}

fn run_osc_invariant(a: OscInvariantArgs) -> Result<(), CliError> {
    let profile = build_profile(a.profile, a.omega0, a.eta, a.drive)?;
    let temperature_mode = a.t1grid.is_some() || a.t2grid.is_some();
    let time_mode = a.tgrid.is_some() || a.tpgrid.is_some();
    if temperature_mode == time_mode {
        return Err(CliError::Config(
            "choose one sweep mode: --T1grid/--T2grid with fixed --t/--tprime, \
             or --tgrid/--tpgrid with fixed --T1/--T2"
                .into(),
        ));
    }

    if temperature_mode {
        let (Some(g1), Some(g2)) = (a.t1grid.clone(), a.t2grid.clone()) else {
            return Err(CliError::Config("both --T1grid and --T2grid are required".into()));
        };
        let (Some(t), Some(tp)) = (a.t, a.tprime) else {
            return Err(CliError::Config(
                "temperature grids need fixed --t and --tprime".into(),
            ));
        };
        let sol = solve_classical(&profile, t.max(tp), a.tol)?;
        let pairs: Vec<(f64, f64)> = g1
            .values()
            .into_iter()
            .flat_map(|x| g2.values().into_iter().map(move |y| (x, y)))
            .collect();
        let (w, wp) = (profile.omega(t)?, profile.omega(tp)?);
        let rows = pool_map(a.workers.max(1), &pairs, |(t1, t2)| {
            let b = delta_s_bounds_invariant(&sol, t, tp, *t1, *t2)?;
            Ok::<_, CliError>(vec![
                Some(*t1),
                Some(*t2),
                Some(b.lower),
                b.exact,
                Some(b.upper),
                Some(w),
                Some(wp),
            ])
        })?;
        let table = Table {
            columns: vec!["T1", "T2", "lower", "exact", "upper", "omega_t", "omega_tprime"],
            rows,
        };
        report_invariant(&sol, &table);
        emit_sweep("osc-invariant", &a, a.format, a.out.as_deref(), a.gnuplot, 2, &table)
    } else {
        let (Some(gt), Some(gtp)) = (a.tgrid.clone(), a.tpgrid.clone()) else {
            return Err(CliError::Config("both --tgrid and --tpgrid are required".into()));
        };
        let (Some(t1), Some(t2)) = (a.t1, a.t2) else {
            return Err(CliError::Config("time grids need fixed --T1 and --T2".into()));
        };
        let t_max = gt.start.max(gt.end).max(gtp.start.max(gtp.end));
        let sol = solve_classical(&profile, t_max, a.tol)?;
        let pairs: Vec<(f64, f64)> = gt
            .values()
            .into_iter()
            .flat_map(|x| gtp.values().into_iter().map(move |y| (x, y)))
            .collect();
        let rows = pool_map(a.workers.max(1), &pairs, |(t, tp)| {
            let b = delta_s_bounds_invariant(&sol, *t, *tp, t1, t2)?;
            Ok::<_, CliError>(vec![
                Some(*t),
                Some(*tp),
                Some(b.lower),
                b.exact,
                Some(b.upper),
                Some(profile.omega(*t)?),
                Some(profile.omega(*tp)?),
            ])
        })?;
        let table = Table {
            columns: vec!["t", "tprime", "lower", "exact", "upper", "omega_t", "omega_tprime"],
            rows,
        };
        report_invariant(&sol, &table);
        emit_sweep("osc-invariant", &a, a.format, a.out.as_deref(), a.gnuplot, 2, &table)
    }
}

fn report_invariant(sol: &ClassicalSolution, table: &Table) {
    info!(
        "osc-invariant: {} rows; trajectory {} steps, max Wronskian drift {:.3e}",
        table.rows.len(),
        sol.n_steps(),
        sol.max_wronskian_drift()
    );
}

fn emit_sweep<A: Serialize>(
    name: &str,
    args: &A,
    format: Format,
    out: Option<&Path>,
    gnuplot: bool,
    n_sweep: usize,
    table: &Table,
) -> Result<(), CliError> {
    let content = match format {
        Format::Csv => render_csv(&config_line(name, args), table),
        Format::Json => render_json(name, args, table, Map::new()),
    };
    write_artifact(out, &content)?;
    if gnuplot {
        if format != Format::Csv {
            return Err(CliError::Config("--gnuplot requires --format csv".into()));
        }
        let Some(csv) = out else {
            return Err(CliError::Config("--gnuplot requires --out".into()));
        };
        let script = write_gnuplot(csv, n_sweep, &table.columns)?;
        info!("wrote {}", script.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// oracle

fn run_oracle(a: OracleArgs) -> Result<(), CliError> {
    let closed = cross_mean_frequencies(a.omega_t, a.omega_tp, a.temperature)?;
    let oracle = fock_oracle_frequencies(a.omega_t, a.omega_tp, a.temperature, a.n)?;
    println!("closed {}", fmt17(closed));
    println!("oracle {}", fmt17(oracle.cross_mean));
    println!("delta {}", fmt17((closed - oracle.cross_mean).abs()));
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep-check

fn run_sweep_check(a: SweepCheckArgs) -> Result<(), CliError> {
    if a.dim_min < 2 || a.dim_max < a.dim_min {
        return Err(CliError::Config("need 2 <= dim-min <= dim-max".into()));
    }
    let mut rng = StdRng::seed_from_u64(a.seed);
    let span = a.dim_max - a.dim_min + 1;

    for i in 0..a.pairs {
        let dim = a.dim_min + i % span;
        let s1 = random_thermal_spec(dim, (a.tmin, a.tmax), &mut rng)?;
        let s2 = random_thermal_spec(dim, (a.tmin, a.tmax), &mut rng)?;
        for (family, result) in [
            ("delta-s", delta_s_bounds(&s1, &s2)),
            ("log-z", log_z_ratio_bounds(&s1, &s2)),
            ("helmholtz", helmholtz_bounds(&s1, &s2)),
        ] {
            if let Err(e) = result {
                print_offender(family, &json!({ "s1": s1, "s2": s2 }));
                return Err(e.into());
            }
        }
    }

    for i in 0..a.grand_pairs {
        let dim = a.dim_min + i % span;
        let g1 = random_grand_spec(dim, (a.tmin, a.tmax), (-3.0, 3.0), &mut rng)?;
        let g2 = random_grand_spec(dim, (a.tmin, a.tmax), (-3.0, 3.0), &mut rng)?;
        for (family, result) in [
            ("grand-delta-s", grand_delta_s_bounds(&g1, &g2)),
            ("grand-log-z", grand_log_z_ratio_bounds(&g1, &g2)),
        ] {
            if let Err(e) = result {
                print_offender(family, &json!({ "s1": g1, "s2": g2 }));
                return Err(e.into());
            }
        }
        let st1 = grand_gibbs_state(&g1)?;
        match grand_entropy_gap(st1.rho(), &g2) {
            Ok(gap) if gap >= -1e-10 => {}
            Ok(gap) => {
                print_offender("grand-gap", &json!({ "s1": g1, "s2": g2, "gap": gap }));
                return Err(thermobound::Error::Inconsistency {
                    what: "grand entropy gap went negative".into(),
                    magnitude: -gap,
                    tolerance: 1e-10,
                }
                .into());
            }
            Err(e) => {
                print_offender("grand-gap", &json!({ "s1": g1, "s2": g2 }));
                return Err(e.into());
            }
        }
    }

    println!(
        "sweep-check: {} canonical pairs x 3 families and {} grand pairs hold",
        a.pairs, a.grand_pairs
    );
    Ok(())
}

fn print_offender(family: &str, detail: &Value) {
    println!(
        "offender {}",
        serde_json::to_string(&json!({ "family": family, "detail": detail }))
            .expect("offender serializes")
    );
}
