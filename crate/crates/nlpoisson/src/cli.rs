//! Command-line front end: one subcommand per run kind, flags overriding
//! configuration-file keys, machine-readable reports on disk and a short
//! human summary on stdout.
//!
//! Exit codes: 0 when every check passed, 1 when a verification failed,
//! 2 for configuration, usage or runtime errors.

use crate::config::{
    parse_cutoff_list, parse_partial, resolve, CommandKind, ConfigError, DataSpec, OutputFormat,
    PartialConfig, RunConfig,
};
use crate::gaussian::GaussianState;
use crate::grid::{sample, Field, SpaceTag, SpatialGrid};
use crate::operators::check_commutation;
use crate::params::make_params;
use crate::quadrature::QuadratureSpec;
use crate::report;
use crate::verifier::{
    bound_check, convergence_scan, divergence_scan, pointwise_check, verify_identity,
    FrequencySet, ProfileData, VerifierError,
};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Verifier(#[from] VerifierError),
    #[error(transparent)]
    Operator(#[from] crate::operators::OperatorError),
    #[error(transparent)]
    Grid(#[from] crate::grid::GridError),
    #[error(transparent)]
    Field(#[from] crate::grid::FieldError),
    #[error(transparent)]
    Gaussian(#[from] crate::gaussian::GaussianError),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("data file {path}: {reason}")]
    DataFile { path: PathBuf, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Pass,
    Fail,
}

#[derive(Parser)]
#[command(name = "nlpoisson", version, about = "Numerical checks for a nonlinear Poisson-type identity of the free Schrodinger group")]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Compare both time-integrated profiles over a frequency set.
    Verify(CommonArgs),
    /// Check the pointwise identity at a list of times.
    Pointwise(CommonArgs),
    /// Scan partial integrals at the long-range power and fit log growth.
    Divergence(CommonArgs),
    /// Norm-bound ratios across a Gaussian family.
    Bounds(CommonArgs),
    /// Residuals of the dilation commutation identities.
    Commutation(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Configuration file in key = value form; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report destination (default <command>.<format>).
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Dimension (1..=3).
    #[arg(long)]
    n: Option<usize>,
    /// Nonlinearity power.
    #[arg(long)]
    p: Option<f64>,
    /// gaussian:<a>, rational_decay, or file:<path>.
    #[arg(long)]
    data: Option<String>,
    /// Grid as <points>:<half-width>.
    #[arg(long)]
    grid: Option<String>,
    /// Frequency window as <max>:<points>.
    #[arg(long)]
    xi: Option<String>,
    /// Quadrature tolerances as <abs>:<rel>.
    #[arg(long)]
    tol: Option<String>,
    /// Comma-separated cutoff (or time) list.
    #[arg(long)]
    cutoffs: Option<String>,
}

fn parse_pair_arg<A: FromStr, B: FromStr>(
    key: &'static str,
    s: &str,
) -> Result<(A, B), ConfigError> {
    let (a, b) = s.split_once(':').ok_or(ConfigError::InvalidValue {
        key,
        reason: format!("expected <a>:<b>, got \"{s}\""),
    })?;
    let a = a.parse().map_err(|_| ConfigError::InvalidValue {
        key,
        reason: format!("cannot parse \"{a}\""),
    })?;
    let b = b.parse().map_err(|_| ConfigError::InvalidValue {
        key,
        reason: format!("cannot parse \"{b}\""),
    })?;
    Ok((a, b))
}

impl CommonArgs {
    fn into_partial(self, command: CommandKind) -> Result<(Option<PathBuf>, PartialConfig), CliError> {
        let mut partial = PartialConfig {
            command: Some(command),
            n: self.n,
            p: self.p,
            output: self.output,
            ..Default::default()
        };
        if let Some(s) = self.data {
            partial.data =
                Some(DataSpec::from_str(&s).map_err(|reason| ConfigError::InvalidValue {
                    key: "data",
                    reason,
                })?);
        }
        if let Some(s) = self.format {
            partial.format =
                Some(OutputFormat::from_str(&s).map_err(|reason| ConfigError::InvalidValue {
                    key: "format",
                    reason,
                })?);
        }
        if let Some(s) = self.grid {
            partial.grid = Some(parse_pair_arg("grid", &s)?);
        }
        if let Some(s) = self.xi {
            partial.xi = Some(parse_pair_arg("xi", &s)?);
        }
        if let Some(s) = self.tol {
            partial.tol = Some(parse_pair_arg("tol", &s)?);
        }
        if let Some(s) = self.cutoffs {
            partial.cutoffs = Some(parse_cutoff_list(&s)?);
        }
        Ok((self.config, partial))
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_entry() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let (command, args) = match cli.command {
        CliCommand::Verify(a) => (CommandKind::Verify, a),
        CliCommand::Pointwise(a) => (CommandKind::Pointwise, a),
        CliCommand::Divergence(a) => (CommandKind::Divergence, a),
        CliCommand::Bounds(a) => (CommandKind::Bounds, a),
        CliCommand::Commutation(a) => (CommandKind::Commutation, a),
    };
    match assemble_and_run(command, args) {
        Ok(RunStatus::Pass) => 0,
        Ok(RunStatus::Fail) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn assemble_and_run(command: CommandKind, args: CommonArgs) -> Result<RunStatus, CliError> {
    let (config_path, flags) = args.into_partial(command)?;
    let base = match config_path {
        Some(path) => {
            let text = fs::read_to_string(&path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            parse_partial(&text)?
        }
        None => PartialConfig::default(),
    };
    let config = resolve(base.overlay(flags))?;
    run(&config)
}

fn quadrature_spec(config: &RunConfig) -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: config.abs_tol,
        rel_tol: config.rel_tol,
        ..Default::default()
    }
}

fn load_field_csv(path: &PathBuf, grid: &SpatialGrid) -> Result<Field, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let mut samples = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (re, im) = line.split_once(',').ok_or_else(|| CliError::DataFile {
            path: path.clone(),
            reason: format!("line {}: expected \"re,im\"", lineno + 1),
        })?;
        let parse = |s: &str| {
            s.trim().parse::<f64>().map_err(|_| CliError::DataFile {
                path: path.clone(),
                reason: format!("line {}: cannot parse \"{s}\"", lineno + 1),
            })
        };
        samples.push(Complex64::new(parse(re)?, parse(im)?));
    }
    if samples.len() != grid.total_points() {
        return Err(CliError::DataFile {
            path: path.clone(),
            reason: format!(
                "expected {} samples for the configured grid, found {}",
                grid.total_points(),
                samples.len()
            ),
        });
    }
    Ok(Field::new(*grid, SpaceTag::Physical, samples)?)
}

fn write_report(config: &RunConfig, csv: Vec<u8>, json: serde_json::Value) -> Result<(), CliError> {
    let bytes = match config.format {
        OutputFormat::Csv => csv,
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&json).expect("report serializes");
            s.push('\n');
            s.into_bytes()
        }
    };
    fs::write(&config.output, bytes).map_err(|source| CliError::Io {
        path: config.output.clone(),
        source,
    })
}

/// Executes a resolved configuration: dispatches to the verifier, writes
/// the report file, prints a one-line summary and reports pass/fail.
pub fn run(config: &RunConfig) -> Result<RunStatus, CliError> {
    let started = Instant::now();
    let status = match config.command {
        CommandKind::Verify => run_verify(config)?,
        CommandKind::Pointwise => run_pointwise(config)?,
        CommandKind::Divergence => run_divergence(config)?,
        CommandKind::Bounds => run_bounds(config)?,
        CommandKind::Commutation => run_commutation(config)?,
    };
    let verdict = if status == RunStatus::Pass { "PASS" } else { "FAIL" };
    println!(
        "{}: {} (report: {}, wall time {:.2}s)",
        config.command,
        verdict,
        config.output.display(),
        started.elapsed().as_secs_f64()
    );
    Ok(status)
}

fn run_verify(config: &RunConfig) -> Result<RunStatus, CliError> {
    let params = make_params(config.n, config.p).map_err(VerifierError::from)?;
    let spec = quadrature_spec(config);
    // pointwise pipelines and the resolution guard need coinciding lattices
    let pipeline_grid = SpatialGrid::self_dual(config.n, config.grid_points)?;

    let (data, xi, threshold, guard) = match &config.data {
        DataSpec::Gaussian(a) => (
            ProfileData::Gaussian(GaussianState::isotropic(*a)?),
            FrequencySet::uniform(config.n, config.xi_max, config.xi_points),
            None,
            Some(&pipeline_grid),
        ),
        DataSpec::RationalDecay => {
            let field = sample(
                |x| {
                    let r2: f64 = x.iter().map(|v| v * v).sum();
                    Complex64::new(1.0 / (1.0 + r2).powi(2), 0.0)
                },
                &pipeline_grid,
            )?;
            (
                ProfileData::Sampled(field),
                FrequencySet::from_dual_lattice(&pipeline_grid, config.xi_max),
                Some(1e-4),
                None,
            )
        }
        DataSpec::File(path) => {
            let field = load_field_csv(path, &pipeline_grid)?;
            (
                ProfileData::Sampled(field),
                FrequencySet::from_dual_lattice(&pipeline_grid, config.xi_max),
                Some(1e-4),
                None,
            )
        }
    };

    let report = verify_identity(&data, &params, &xi, &spec, guard, threshold)?;
    println!(
        "max relative residual {:.3e} over {} frequency points (combined quadrature estimate {:.3e})",
        report.max_rel_residual,
        xi.len(),
        report.combined_error
    );
    for w in &report.quadrature_warnings {
        println!("warning: {w}");
    }

    let mut csv = Vec::new();
    report::write_verification_csv(&mut csv, config, &report)
        .expect("in-memory write cannot fail");
    write_report(config, csv, report::verification_json(config, &report))?;
    Ok(if report.pass { RunStatus::Pass } else { RunStatus::Fail })
}

fn pointwise_data(config: &RunConfig, grid: &SpatialGrid) -> Result<ProfileData, CliError> {
    Ok(match &config.data {
        DataSpec::Gaussian(a) => ProfileData::Gaussian(GaussianState::isotropic(*a)?),
        DataSpec::RationalDecay => ProfileData::Sampled(sample(
            |x| {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                Complex64::new(1.0 / (1.0 + r2).powi(2), 0.0)
            },
            grid,
        )?),
        DataSpec::File(path) => ProfileData::Sampled(load_field_csv(path, grid)?),
    })
}

fn run_pointwise(config: &RunConfig) -> Result<RunStatus, CliError> {
    const PASS_TOL: f64 = 1e-8;
    let params = make_params(config.n, config.p).map_err(VerifierError::from)?;
    let grid = SpatialGrid::self_dual(config.n, config.grid_points)?;
    let data = pointwise_data(config, &grid)?;
    let mut rows = Vec::new();
    let mut pass = true;
    for &t in &config.cutoffs {
        let outcome = pointwise_check(&data, &params, t, config.grid_points)?;
        println!("t = {t}: residual {:.3e}", outcome.residual);
        if let Some(w) = &outcome.warning {
            println!("warning: {w}");
        }
        pass &= outcome.residual <= PASS_TOL;
        rows.push((t, outcome));
    }
    let mut csv = Vec::new();
    report::write_pointwise_csv(&mut csv, config, &rows).expect("in-memory write cannot fail");
    write_report(config, csv, report::pointwise_json(config, &rows))?;
    Ok(if pass { RunStatus::Pass } else { RunStatus::Fail })
}

fn run_divergence(config: &RunConfig) -> Result<RunStatus, CliError> {
    let spec = quadrature_spec(config);
    let a = match config.data {
        DataSpec::Gaussian(a) => a,
        _ => 1.0, // the scan is a Gaussian oracle computation
    };
    let scan = divergence_scan(a, config.n, &config.cutoffs, &spec)?;
    let companion_p = 1.0 + 2.0 / config.n as f64 + 0.1;
    let companion = convergence_scan(a, config.n, companion_p, &config.cutoffs, &spec)?;

    println!(
        "p = {}: fitted slope {:.4} (relative fit residual {:.3}%)",
        scan.p,
        scan.fitted_slope,
        100.0 * scan.relative_fit_residual
    );
    let incs = companion.increments();
    let saturating = incs.windows(2).all(|w| w[1] < w[0])
        && (incs.len() < 2 || incs[0] / incs[incs.len() - 1] >= 1.2);
    println!(
        "companion p = {companion_p}: increments {:?} ({})",
        incs,
        if saturating { "saturating" } else { "not saturating" }
    );

    let pass = scan.fitted_slope > 0.0 && scan.relative_fit_residual < 0.02 && saturating;
    let mut csv = Vec::new();
    report::write_divergence_csv(&mut csv, config, &scan).expect("in-memory write cannot fail");
    write_report(config, csv, report::divergence_json(config, &scan, Some(&companion)))?;
    Ok(if pass { RunStatus::Pass } else { RunStatus::Fail })
}

fn run_bounds(config: &RunConfig) -> Result<RunStatus, CliError> {
    const HOMOGENEITY_TOL: f64 = 1e-6;
    let params = make_params(config.n, config.p).map_err(VerifierError::from)?;
    let spec = quadrature_spec(config);
    let grid = SpatialGrid::new(config.n, config.grid_points, config.grid_half_width)?;
    let xi = FrequencySet::uniform(config.n, config.xi_max, config.xi_points);
    let a0 = match config.data {
        DataSpec::Gaussian(a) => a,
        _ => 1.0,
    };
    let widths = [a0 / 4.0, a0, 4.0 * a0];
    let amplitudes = [0.1, 1.0, 10.0];
    let mut family = Vec::new();
    for &w in &widths {
        for &amp in &amplitudes {
            family.push(GaussianState::new(
                Complex64::new(amp, 0.0),
                Complex64::new(w, 0.0),
            )?);
        }
    }
    let report = bound_check(&family, &params, &xi, &spec, &grid)?;

    // amplitude scaling within each width group must leave ratios constant
    let mut pass = true;
    for (gi, _) in widths.iter().enumerate() {
        let group = &report.members[gi * amplitudes.len()..(gi + 1) * amplitudes.len()];
        let lo = group.iter().map(|m| m.ratio).fold(f64::MAX, f64::min);
        let hi = group.iter().map(|m| m.ratio).fold(f64::MIN, f64::max);
        if hi / lo - 1.0 > HOMOGENEITY_TOL {
            pass = false;
            println!(
                "warning: ratio drift {:.3e} under amplitude scaling at width {}",
                hi / lo - 1.0,
                widths[gi]
            );
        }
    }
    println!(
        "ratios span [{:.6}, {:.6}] across {} members",
        report.min_ratio,
        report.max_ratio,
        report.members.len()
    );
    let mut csv = Vec::new();
    report::write_bounds_csv(&mut csv, config, &report).expect("in-memory write cannot fail");
    write_report(config, csv, report::bounds_json(config, &report))?;
    Ok(if pass { RunStatus::Pass } else { RunStatus::Fail })
}

fn run_commutation(config: &RunConfig) -> Result<RunStatus, CliError> {
    let grid = SpatialGrid::self_dual(config.n, config.grid_points)?;
    let mut rows = Vec::new();
    let mut pass = true;
    for &t in &config.cutoffs {
        let r = check_commutation(t, &grid)?;
        println!(
            "t = {t}: residuals {:.3e} / {:.3e} / {:.3e}",
            r.fourier_dilation, r.dilation_inverse, r.inverse_fourier_dilation
        );
        pass &= r.all_below(config.abs_tol.max(1e-10));
        rows.push((t, r));
    }
    let mut csv = Vec::new();
    report::write_commutation_csv(&mut csv, config, &rows).expect("in-memory write cannot fail");
    write_report(config, csv, report::commutation_json(config, &rows))?;
    Ok(if pass { RunStatus::Pass } else { RunStatus::Fail })
}

