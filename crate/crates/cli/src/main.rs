//! `bistrip`: command-line front end for the two-interface strip model
//! library.
//!
//! One binary with six subcommands. Model parameters resolve in three
//! layers: built-in defaults (sigma_bar 2, sigma_tilde 1, mu 1,
//! rho1_star 1), then an optional flat `key = value` config file, then
//! flags. When a config file is supplied the defaults are disabled and
//! every parameter must come from the file or a flag, so an incomplete
//! file is reported (exit 2) rather than silently papered over.
//!
//! Tables are emitted as CSV (header row, LF endings) or as JSON arrays
//! with one object per CSV row; floats carry 17 significant digits in
//! both formats, so identical invocations produce byte-identical output.
//! Files are written atomically. Exit status: 0 on success (for `verify`,
//! only if every suite passed), 1 on numerical failure, 2 on bad usage.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bistrip_core::config::FileConfig;
use bistrip_core::curve::BoundaryCurve;
use bistrip_core::error::Error as CoreError;
use bistrip_core::evolution::{growth_rate, step, LinearState};
use bistrip_core::format::{atomic_write, csv_from_rows, fmt_float};
use bistrip_core::modes::{
    assemble_mode, gamma1, gamma2, gamma_sweep, positivity_threshold, ModeCoefficients,
};
use bistrip_core::stationary::flat_stationary;
use bistrip_core::strip::{
    bifurcation_residual, build_operator, ellipticity_bounds, phi_prime_up, suggested_c0,
};
use bistrip_core::verify::VerifyReport;
use bistrip_core::{FlatStationary, ModelParams};

const GRID_MIN: usize = 8;
const GRID_MAX: usize = 16384;
/// Step used for the emitted directional derivative of the solvability
/// functional.
const PHI_PRIME_EPS: f64 = 1e-4;

#[derive(Parser)]
#[command(
    name = "bistrip",
    version,
    about = "Stationary solutions, mode analysis, and linearized evolution \
             of a two-interface strip model"
)]
struct Cli {
    /// Flat `key = value` parameter file; when given, every model parameter
    /// must come from the file or from a flag.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Write the emitted table to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format for emitted tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Nutrient supply on the outer interface.
    #[arg(
        long,
        global = true,
        value_name = "REAL",
        allow_negative_numbers = true
    )]
    sigma_bar: Option<f64>,

    /// Necrotic nutrient threshold.
    #[arg(
        long,
        global = true,
        value_name = "REAL",
        allow_negative_numbers = true
    )]
    sigma_tilde: Option<f64>,

    /// Aggressiveness constant.
    #[arg(
        long,
        global = true,
        value_name = "REAL",
        allow_negative_numbers = true
    )]
    mu: Option<f64>,

    /// Height of the inner interface of the flat solution.
    #[arg(
        long,
        global = true,
        value_name = "REAL",
        allow_negative_numbers = true
    )]
    rho1_star: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Flat stationary solution: interface heights, necrosis constant,
    /// nutrient and pressure profiles.
    Stationary {
        /// Number of grid intervals in the emitted profile table.
        #[arg(long, default_value_t = 256)]
        n: usize,
    },
    /// Closed-form profiles of one linearized mode and the tension pair
    /// that makes it stationary.
    Modes {
        /// Wavenumber of the mode (k >= 1).
        #[arg(long)]
        k: usize,
        /// Number of grid intervals in the emitted profile table.
        #[arg(long, default_value_t = 256)]
        n: usize,
    },
    /// Surface-tension coefficient curves gamma1(k), gamma2(k) for
    /// k = 1..=k_max at unit amplitude ratio.
    GammaSweep {
        /// Largest wavenumber in the table.
        #[arg(long, default_value_t = 30)]
        k_max: usize,
    },
    /// Run the deterministic self-check suites and report pass/fail.
    Verify,
    /// Integrate the linearized interface motion mode by mode and emit the
    /// trajectory together with a dispersion table.
    Evolve {
        /// Largest evolved wavenumber.
        #[arg(long, default_value_t = 5)]
        k_max: usize,
        /// Vertical grid intervals of the per-mode solves.
        #[arg(long, default_value_t = 256)]
        n: usize,
        /// Time step.
        #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
        dt: f64,
        /// Number of steps.
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Factor applied to the matched inner tension of every mode.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        gamma1_scale: f64,
        /// Factor applied to the matched outer tension of every mode.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        gamma2_scale: f64,
    },
    /// Quantities prepared for the bifurcation analysis at the flat pair:
    /// solvability functional and its derivative, ellipticity bounds, and
    /// stationarity residual norms.
    BifurcationPrep {
        /// Wavenumber whose matched tension pair is used.
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Horizontal samples of the interface curves.
        #[arg(long, default_value_t = 64)]
        m: usize,
        /// Vertical grid intervals.
        #[arg(long, default_value_t = 256)]
        n: usize,
    },
}

/// Failures split by exit status: bad usage or configuration (2) versus
/// numerical breakdown during an accepted run (1).
enum CliError {
    Usage(String),
    Failure(String),
}

fn usage(e: CoreError) -> CliError {
    CliError::Usage(e.to_string())
}

fn failure(e: CoreError) -> CliError {
    CliError::Failure(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    let (params, rho1_star) = resolve_params(cli)?;
    let fs = flat_stationary(&params, rho1_star).map_err(usage)?;
    match cli.command {
        Command::Stationary { n } => cmd_stationary(cli, &fs, n),
        Command::Modes { k, n } => cmd_modes(cli, &fs, k, n),
        Command::GammaSweep { k_max } => cmd_gamma_sweep(cli, &fs, k_max),
        Command::Verify => cmd_verify(cli, &params, rho1_star),
        Command::Evolve {
            k_max,
            n,
            dt,
            steps,
            gamma1_scale,
            gamma2_scale,
        } => cmd_evolve(cli, &fs, k_max, n, dt, steps, gamma1_scale, gamma2_scale),
        Command::BifurcationPrep { k, m, n } => cmd_bifurcation_prep(cli, &fs, k, m, n),
    }
}

// ---------------------------------------------------------------------------
// Parameter resolution
// ---------------------------------------------------------------------------

fn resolve_params(cli: &Cli) -> Result<(ModelParams, f64), CliError> {
    let file = match &cli.config {
        Some(path) => Some(FileConfig::load(path).map_err(usage)?),
        None => None,
    };
    let pick = |key: &'static str, flag: Option<f64>, default: f64| -> Result<f64, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match &file {
            Some(cfg) => cfg.get(key).ok_or_else(|| {
                CliError::Usage(format!("missing required key `{key}` in config file"))
            }),
            None => Ok(default),
        }
    };
    let sigma_bar = pick("sigma_bar", cli.sigma_bar, 2.0)?;
    let sigma_tilde = pick("sigma_tilde", cli.sigma_tilde, 1.0)?;
    let mu = pick("mu", cli.mu, 1.0)?;
    let rho1_star = pick("rho1_star", cli.rho1_star, 1.0)?;
    let params = ModelParams::new(sigma_bar, sigma_tilde, mu).map_err(usage)?;
    Ok((params, rho1_star))
}

fn check_grid(name: &str, value: usize) -> Result<(), CliError> {
    if (GRID_MIN..=GRID_MAX).contains(&value) {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "flag `--{name}` must lie in [{GRID_MIN}, {GRID_MAX}], got {value}"
        )))
    }
}

fn check_wavenumber(name: &str, value: usize) -> Result<(), CliError> {
    if value >= 1 {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "flag `--{name}` must be at least 1"
        )))
    }
}

// ---------------------------------------------------------------------------
// Table rendering
// ---------------------------------------------------------------------------

enum Cell {
    Int(usize),
    Float(f64),
}

impl Cell {
    /// Rendering shared by both formats; `fmt_float` output is a valid
    /// JSON number literal.
    fn text(&self) -> String {
        match *self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_float(v),
        }
    }
}

struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let rows: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|r| r.iter().map(Cell::text).collect())
                    .collect();
                csv_from_rows(&self.columns.join(","), &rows)
            }
            Format::Json => {
                if self.rows.is_empty() {
                    return "[]\n".to_string();
                }
                let mut out = String::from("[\n");
                let last = self.rows.len() - 1;
                for (i, row) in self.rows.iter().enumerate() {
                    debug_assert_eq!(row.len(), self.columns.len());
                    out.push_str("  {");
                    for (j, (column, cell)) in self.columns.iter().zip(row).enumerate() {
                        if j > 0 {
                            out.push_str(", ");
                        }
                        out.push('"');
                        out.push_str(column);
                        out.push_str("\": ");
                        out.push_str(&cell.text());
                    }
                    out.push('}');
                    if i != last {
                        out.push(',');
                    }
                    out.push('\n');
                }
                out.push_str("]\n");
                out
            }
        }
    }
}

/// Writes to stdout, treating a broken pipe (e.g. `bistrip ... | head`) as
/// an orderly early finish instead of a panic.
fn write_stdout(body: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if out.write_all(body.as_bytes()).is_err() {
        std::process::exit(0);
    }
}

fn emit(table: &Table, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    let body = table.render(format);
    match out {
        Some(path) => atomic_write(path, &body).map_err(failure),
        None => {
            write_stdout(&body);
            Ok(())
        }
    }
}

fn print_scalar(key: &str, value: f64) {
    write_stdout(&format!("{key} = {}\n", fmt_float(value)));
}

/// Sibling path for the secondary table of `evolve`:
/// `runs/traj.csv` becomes `runs/traj_dispersion.csv`.
fn dispersion_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".to_string());
    let name = match out.extension() {
        Some(ext) => format!("{stem}_dispersion.{}", ext.to_string_lossy()),
        None => format!("{stem}_dispersion"),
    };
    out.with_file_name(name)
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_stationary(cli: &Cli, fs: &FlatStationary, n: usize) -> Result<ExitCode, CliError> {
    check_grid("n", n)?;
    print_scalar("delta", fs.delta);
    print_scalar("rho1_star", fs.rho1_star);
    print_scalar("rho2_star", fs.rho2_star());
    print_scalar("c", fs.c_value);
    let mut rows = Vec::with_capacity(n + 1);
    for l in 0..=n {
        let y = if l == n {
            fs.rho2_star()
        } else {
            fs.rho1_star + fs.delta * l as f64 / n as f64
        };
        let sigma = fs.sigma_star(y).map_err(failure)?;
        let p = fs.p_star(y).map_err(failure)?;
        rows.push(vec![Cell::Float(y), Cell::Float(sigma), Cell::Float(p)]);
    }
    let table = Table {
        columns: &["y", "sigma", "p"],
        rows,
    };
    emit(&table, cli.format, cli.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_modes(cli: &Cli, fs: &FlatStationary, k: usize, n: usize) -> Result<ExitCode, CliError> {
    check_wavenumber("k", k)?;
    check_grid("n", n)?;
    let mode = ModeCoefficients::new(k, 1.0, 0.0, 1.0, 0.0).map_err(usage)?;
    let solution = assemble_mode(&mode, fs).map_err(failure)?;
    print_scalar("gamma1", solution.gamma1);
    print_scalar("gamma2", solution.gamma2);
    let mut rows = Vec::with_capacity(n + 1);
    for l in 0..=n {
        let y = l as f64 / n as f64;
        rows.push(vec![
            Cell::Float(y),
            Cell::Float(solution.a.eval(y)),
            Cell::Float(solution.b.eval(y)),
            Cell::Float(solution.m.eval(y)),
            Cell::Float(solution.n.eval(y)),
        ]);
    }
    let table = Table {
        columns: &["y", "a", "b", "m", "n"],
        rows,
    };
    emit(&table, cli.format, cli.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_gamma_sweep(cli: &Cli, fs: &FlatStationary, k_max: usize) -> Result<ExitCode, CliError> {
    check_wavenumber("k-max", k_max)?;
    let sweep = gamma_sweep(fs, k_max, 1.0).map_err(failure)?;
    match positivity_threshold(&sweep) {
        Some(k0) => write_stdout(&format!("k0 = {k0}\n")),
        None => write_stdout("k0 = none\n"),
    }
    let rows = sweep
        .iter()
        .map(|row| {
            vec![
                Cell::Int(row.k),
                Cell::Float(row.gamma1),
                Cell::Float(row.gamma2),
            ]
        })
        .collect();
    let table = Table {
        columns: &["k", "gamma1", "gamma2"],
        rows,
    };
    emit(&table, cli.format, cli.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cli: &Cli, params: &ModelParams, rho1_star: f64) -> Result<ExitCode, CliError> {
    let report = VerifyReport::run(params, rho1_star).map_err(failure)?;
    let body = match cli.format {
        Format::Csv => report.render_text(),
        Format::Json => report.to_json(),
    };
    write_stdout(&body);
    if let Some(path) = &cli.out {
        atomic_write(path, &body).map_err(failure)?;
    }
    Ok(if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_evolve(
    cli: &Cli,
    fs: &FlatStationary,
    k_max: usize,
    n: usize,
    dt: f64,
    steps: usize,
    gamma1_scale: f64,
    gamma2_scale: f64,
) -> Result<ExitCode, CliError> {
    check_wavenumber("k-max", k_max)?;
    check_grid("n", n)?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(CliError::Usage(format!(
            "flag `--dt` must be positive and finite, got {dt}"
        )));
    }
    for (name, scale) in [
        ("gamma1-scale", gamma1_scale),
        ("gamma2-scale", gamma2_scale),
    ] {
        if !(scale.is_finite() && scale >= 0.0) {
            return Err(CliError::Usage(format!(
                "flag `--{name}` must be nonnegative and finite, got {scale}"
            )));
        }
    }

    let mut gammas = Vec::with_capacity(k_max + 1);
    gammas.push((1.0, 1.0)); // k = 0 carries no amplitude below
    for k in 1..=k_max {
        let g1 = gamma1(k, fs, 1.0).map_err(failure)?;
        let g2 = gamma2(k, fs, 1.0).map_err(failure)?;
        gammas.push((gamma1_scale * g1, gamma2_scale * g2));
    }

    let mut coeffs = vec![(0.0, 0.0); k_max + 1];
    for c in coeffs.iter_mut().skip(1) {
        *c = (1.0, 0.0);
    }
    let mut state = LinearState::new(coeffs.clone(), coeffs).map_err(failure)?;

    let mut rows = Vec::with_capacity((steps + 1) * (k_max + 1));
    let record = |state: &LinearState, rows: &mut Vec<Vec<Cell>>| {
        for k in 0..=k_max {
            rows.push(vec![
                Cell::Float(state.time),
                Cell::Int(k),
                Cell::Float(state.r_coeffs[k].0),
                Cell::Float(state.r_coeffs[k].1),
                Cell::Float(state.s_coeffs[k].0),
                Cell::Float(state.s_coeffs[k].1),
            ]);
        }
    };
    record(&state, &mut rows);
    for _ in 0..steps {
        state = step(&state, fs, &gammas, n, dt).map_err(failure)?;
        record(&state, &mut rows);
    }
    let trajectory = Table {
        columns: &["time", "k", "a_k", "b_k", "c_k", "d_k"],
        rows,
    };

    let mut rate_rows = Vec::with_capacity(k_max);
    for (k, &(g1, g2)) in gammas.iter().enumerate().skip(1) {
        let rate = growth_rate(k, fs, g1, g2, n).map_err(failure)?;
        rate_rows.push(vec![Cell::Int(k), Cell::Float(rate)]);
    }
    let dispersion = Table {
        columns: &["k", "rate"],
        rows: rate_rows,
    };

    emit(&trajectory, cli.format, cli.out.as_deref())?;
    let dispersion_out = cli.out.as_deref().map(dispersion_path);
    emit(&dispersion, cli.format, dispersion_out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bifurcation_prep(
    cli: &Cli,
    fs: &FlatStationary,
    k: usize,
    m: usize,
    n: usize,
) -> Result<ExitCode, CliError> {
    check_wavenumber("k", k)?;
    check_grid("m", m)?;
    check_grid("n", n)?;
    if !n.is_multiple_of(2) || n < 32 {
        return Err(CliError::Usage(format!(
            "flag `--n` must be even and at least 32 for bifurcation-prep, got {n}"
        )));
    }
    let rho1 = BoundaryCurve::constant(m, fs.rho1_star).map_err(failure)?;
    let rho2 = BoundaryCurve::constant(m, fs.rho2_star()).map_err(failure)?;
    let g1 = gamma1(k, fs, 1.0).map_err(failure)?;
    let g2 = gamma2(k, fs, 1.0).map_err(failure)?;
    let operator = build_operator(&rho1, &rho2).map_err(failure)?;
    let (lambda_lower, lambda_upper) = ellipticity_bounds(&operator);
    let c0 = suggested_c0(&rho1, &rho2, g2, &fs.params, n).map_err(failure)?;
    let residual =
        bifurcation_residual(&rho1, &rho2, g1, g2, c0, &fs.params, fs, n).map_err(failure)?;
    let res1_sup = residual
        .res1
        .iter()
        .fold(0.0_f64, |acc, r| acc.max(r.abs()));
    let res2_sup = residual
        .res2
        .iter()
        .fold(0.0_f64, |acc, r| acc.max(r.abs()));
    let phi_prime = phi_prime_up(&rho1, &rho2, &fs.params, n, PHI_PRIME_EPS).map_err(failure)?;

    let scalars = [
        ("phi", residual.phi_value),
        ("phi_prime", phi_prime),
        ("lambda_lower", lambda_lower),
        ("lambda_upper", lambda_upper),
        ("res1_sup", res1_sup),
        ("res2_sup", res2_sup),
        ("c0", c0),
        ("gamma1", g1),
        ("gamma2", g2),
    ];
    for (key, value) in scalars {
        print_scalar(key, value);
    }
    let table = Table {
        columns: &[
            "phi",
            "phi_prime",
            "lambda_lower",
            "lambda_upper",
            "res1_sup",
            "res2_sup",
            "c0",
            "gamma1",
            "gamma2",
        ],
        rows: vec![scalars.iter().map(|&(_, v)| Cell::Float(v)).collect()],
    };
    emit(&table, cli.format, cli.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}
