//! Run configuration: a flat `key = value` document plus command-line
//! overrides, resolved into a validated [`RunConfig`].
//!
//! Recognized keys (see the README for the full reference):
//!
//! ```text
//! command  = verify | pointwise | divergence | bounds | commutation
//! n        = 1 | 2 | 3
//! p        = <real>              (required by verify/pointwise/bounds)
//! data     = gaussian:<a> | rational_decay | file:<path>
//! grid     = <N>:<L>             (default 512:20)
//! xi       = <max>:<points>      (default 4:65)
//! tol      = <abs>:<rel>         (default 1e-10:1e-10)
//! cutoffs  = <comma list>        (repeatable; divergence cutoffs or the
//!                                 time list of pointwise/commutation)
//! output   = <path>              (default <command>.<format>)
//! format   = csv | json
//! ```
//!
//! Unknown keys are errors, never silently ignored. Lines may repeat only
//! for `cutoffs`, where values accumulate.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use thiserror::Error;

use crate::params::{classify_regime, RegimeTag};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown configuration key \"{0}\"")]
    UnknownKey(String),
    #[error("missing required key \"{0}\"")]
    MissingKey(&'static str),
    #[error("duplicate key \"{0}\" (only cutoffs may repeat)")]
    DuplicateKey(String),
    #[error("invalid value for \"{key}\": {reason}")]
    InvalidValue { key: &'static str, reason: String },
    #[error("malformed line {line}: expected \"key = value\"")]
    MalformedLine { line: usize },
    #[error("{command} rejected: {reason}")]
    InvalidRun { command: CommandKind, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Verify,
    Pointwise,
    Divergence,
    Bounds,
    Commutation,
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CommandKind::Verify => "verify",
            CommandKind::Pointwise => "pointwise",
            CommandKind::Divergence => "divergence",
            CommandKind::Bounds => "bounds",
            CommandKind::Commutation => "commutation",
        };
        f.write_str(s)
    }
}

impl FromStr for CommandKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "verify" => Ok(CommandKind::Verify),
            "pointwise" => Ok(CommandKind::Pointwise),
            "divergence" => Ok(CommandKind::Divergence),
            "bounds" => Ok(CommandKind::Bounds),
            "commutation" => Ok(CommandKind::Commutation),
            other => Err(format!("unknown command \"{other}\"")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataSpec {
    Gaussian(f64),
    RationalDecay,
    File(PathBuf),
}

impl fmt::Display for DataSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataSpec::Gaussian(a) => write!(f, "gaussian:{a:?}"),
            DataSpec::RationalDecay => f.write_str("rational_decay"),
            DataSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for DataSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(rest) = s.strip_prefix("gaussian:") {
            let a: f64 = rest.parse().map_err(|_| format!("bad gaussian width \"{rest}\""))?;
            if !(a > 0.0) || !a.is_finite() {
                return Err(format!("gaussian width must be positive, got {a}"));
            }
            return Ok(DataSpec::Gaussian(a));
        }
        if s == "rational_decay" {
            return Ok(DataSpec::RationalDecay);
        }
        if let Some(rest) = s.strip_prefix("file:") {
            return Ok(DataSpec::File(PathBuf::from(rest)));
        }
        Err(format!("expected gaussian:<a>, rational_decay or file:<path>, got \"{s}\""))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format \"{other}\" (csv or json)")),
        }
    }
}

/// Unresolved configuration: what the document and the flags provided.
#[derive(Debug, Clone, Default)]
pub struct PartialConfig {
    pub command: Option<CommandKind>,
    pub n: Option<usize>,
    pub p: Option<f64>,
    pub data: Option<DataSpec>,
    pub grid: Option<(usize, f64)>,
    pub xi: Option<(f64, usize)>,
    pub tol: Option<(f64, f64)>,
    pub cutoffs: Option<Vec<f64>>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl PartialConfig {
    /// Later (flag-level) settings override earlier (file-level) ones.
    pub fn overlay(self, over: PartialConfig) -> PartialConfig {
        PartialConfig {
            command: over.command.or(self.command),
            n: over.n.or(self.n),
            p: over.p.or(self.p),
            data: over.data.or(self.data),
            grid: over.grid.or(self.grid),
            xi: over.xi.or(self.xi),
            tol: over.tol.or(self.tol),
            cutoffs: over.cutoffs.or(self.cutoffs),
            output: over.output.or(self.output),
            format: over.format.or(self.format),
        }
    }
}

fn parse_pair<A: FromStr, B: FromStr>(key: &'static str, s: &str) -> Result<(A, B), ConfigError> {
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

pub fn parse_cutoff_list(s: &str) -> Result<Vec<f64>, ConfigError> {
    s.split(',')
        .map(|tok| {
            tok.trim().parse::<f64>().map_err(|_| ConfigError::InvalidValue {
                key: "cutoffs",
                reason: format!("cannot parse \"{tok}\""),
            })
        })
        .collect()
}

/// Parses a `key = value` document into a [`PartialConfig`].
pub fn parse_partial(text: &str) -> Result<PartialConfig, ConfigError> {
    let mut cfg = PartialConfig::default();
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or(ConfigError::MalformedLine { line: lineno + 1 })?;
        let key = key.trim();
        let value = value.trim();
        let count = seen.entry(key.to_string()).or_insert(0);
        *count += 1;
        if *count > 1 && key != "cutoffs" {
            return Err(ConfigError::DuplicateKey(key.to_string()));
        }
        match key {
            "command" => {
                cfg.command = Some(value.parse().map_err(|reason| ConfigError::InvalidValue {
                    key: "command",
                    reason,
                })?)
            }
            "n" => {
                cfg.n = Some(value.parse().map_err(|_| ConfigError::InvalidValue {
                    key: "n",
                    reason: format!("cannot parse \"{value}\""),
                })?)
            }
            "p" => {
                cfg.p = Some(value.parse().map_err(|_| ConfigError::InvalidValue {
                    key: "p",
                    reason: format!("cannot parse \"{value}\""),
                })?)
            }
            "data" => {
                cfg.data = Some(value.parse().map_err(|reason| ConfigError::InvalidValue {
                    key: "data",
                    reason,
                })?)
            }
            "grid" => cfg.grid = Some(parse_pair("grid", value)?),
            "xi" => cfg.xi = Some(parse_pair("xi", value)?),
            "tol" => cfg.tol = Some(parse_pair("tol", value)?),
            "cutoffs" => {
                let mut list = cfg.cutoffs.take().unwrap_or_default();
                list.extend(parse_cutoff_list(value)?);
                cfg.cutoffs = Some(list);
            }
            "output" => cfg.output = Some(PathBuf::from(value)),
            "format" => {
                cfg.format = Some(value.parse().map_err(|reason| ConfigError::InvalidValue {
                    key: "format",
                    reason,
                })?)
            }
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
    }
    Ok(cfg)
}

/// Fully resolved, validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n: usize,
    pub p: f64,
    pub data: DataSpec,
    pub grid_points: usize,
    pub grid_half_width: f64,
    pub xi_max: f64,
    pub xi_points: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub cutoffs: Vec<f64>,
    pub output: PathBuf,
    pub format: OutputFormat,
}

impl RunConfig {
    /// Key/value pairs in fixed order, embedded into every report.
    pub fn echo_pairs(&self) -> Vec<(&'static str, String)> {
        vec![
            ("command", self.command.to_string()),
            ("n", self.n.to_string()),
            ("p", format!("{:?}", self.p)),
            ("data", self.data.to_string()),
            ("grid", format!("{}:{:?}", self.grid_points, self.grid_half_width)),
            ("xi", format!("{:?}:{}", self.xi_max, self.xi_points)),
            ("tol", format!("{:?}:{:?}", self.abs_tol, self.rel_tol)),
            (
                "cutoffs",
                self.cutoffs
                    .iter()
                    .map(|c| format!("{c:?}"))
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("format", self.format.to_string()),
        ]
    }
}

fn default_cutoffs(command: CommandKind) -> Vec<f64> {
    match command {
        CommandKind::Divergence => vec![10.0, 100.0, 1000.0, 10000.0],
        CommandKind::Commutation => vec![0.125, 0.5, 1.0, 2.0, 8.0],
        _ => vec![0.1, 0.5, 1.0, 2.0, 10.0],
    }
}

/// Applies defaults and validates everything a run needs up front; nothing
/// is computed before this succeeds.
pub fn resolve(partial: PartialConfig) -> Result<RunConfig, ConfigError> {
    let command = partial.command.ok_or(ConfigError::MissingKey("command"))?;
    let n = partial.n.ok_or(ConfigError::MissingKey("n"))?;
    if !(1..=3).contains(&n) {
        return Err(ConfigError::InvalidValue { key: "n", reason: format!("must be 1..=3, got {n}") });
    }

    let needs_p = matches!(command, CommandKind::Verify | CommandKind::Pointwise | CommandKind::Bounds);
    let p = match partial.p {
        Some(p) => p,
        None if needs_p => return Err(ConfigError::MissingKey("p")),
        // divergence pins p internally; commutation never uses it
        None => 1.0 + 2.0 / n as f64,
    };
    if needs_p {
        let regime = classify_regime(n, p).map_err(|e| ConfigError::InvalidValue {
            key: "p",
            reason: e.to_string(),
        })?;
        if matches!(command, CommandKind::Verify | CommandKind::Bounds)
            && !regime.admits_verification()
        {
            let reason = match regime {
                RegimeTag::LongRange => format!(
                    "p = {p} is at or below the long-range threshold 1 + 2/n = {}; both integrals diverge there",
                    1.0 + 2.0 / n as f64
                ),
                _ => format!("p = {p} lies above the energy-critical power"),
            };
            return Err(ConfigError::InvalidRun { command, reason });
        }
    }

    let needs_data = matches!(command, CommandKind::Verify | CommandKind::Pointwise | CommandKind::Bounds);
    let data = match partial.data {
        Some(d) => d,
        None if needs_data => return Err(ConfigError::MissingKey("data")),
        None => DataSpec::Gaussian(1.0),
    };

    let (grid_points, grid_half_width) = partial.grid.unwrap_or((512, 20.0));
    if grid_points < 8 || !grid_points.is_power_of_two() {
        return Err(ConfigError::InvalidValue {
            key: "grid",
            reason: format!("point count must be a power of two >= 8, got {grid_points}"),
        });
    }
    // keep the n-cube addressable: 512^3 nodes would need gigabytes
    if n == 3 && grid_points > 128 {
        return Err(ConfigError::InvalidValue {
            key: "grid",
            reason: format!("n = 3 supports at most 128 points per axis, got {grid_points}"),
        });
    }
    if !(grid_half_width > 0.0) {
        return Err(ConfigError::InvalidValue {
            key: "grid",
            reason: format!("half-width must be positive, got {grid_half_width}"),
        });
    }

    let (xi_max, xi_points) = partial.xi.unwrap_or((4.0, 65));
    if !(xi_max > 0.0) || xi_points < 2 {
        return Err(ConfigError::InvalidValue {
            key: "xi",
            reason: "need xi_max > 0 and at least two points".into(),
        });
    }

    let (abs_tol, rel_tol) = partial.tol.unwrap_or((1e-10, 1e-10));
    if !(abs_tol > 0.0) || !(rel_tol > 0.0) {
        return Err(ConfigError::InvalidValue {
            key: "tol",
            reason: "tolerances must be positive".into(),
        });
    }

    let cutoffs = match partial.cutoffs {
        Some(c) if !c.is_empty() => {
            if c.windows(2).any(|w| w[1] <= w[0]) || c.iter().any(|v| !(*v > 0.0)) {
                return Err(ConfigError::InvalidValue {
                    key: "cutoffs",
                    reason: "must be positive and strictly increasing".into(),
                });
            }
            c
        }
        _ => default_cutoffs(command),
    };

    let format = partial.format.unwrap_or(OutputFormat::Csv);
    let output = partial
        .output
        .unwrap_or_else(|| PathBuf::from(format!("{command}.{format}")));

    Ok(RunConfig {
        command,
        n,
        p,
        data,
        grid_points,
        grid_half_width,
        xi_max,
        xi_points,
        abs_tol,
        rel_tol,
        cutoffs,
        output,
        format,
    })
}

/// Parses a complete configuration document into a validated [`RunConfig`].
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    resolve(parse_partial(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_verify_gets_defaults() {
        let cfg = parse_config("command = verify\nn = 1\np = 4.0\ndata = gaussian:1.0\n").unwrap();
        assert_eq!(cfg.grid_points, 512);
        assert_eq!(cfg.grid_half_width, 20.0);
        assert_eq!(cfg.xi_max, 4.0);
        assert_eq!(cfg.xi_points, 65);
        assert_eq!(cfg.format, OutputFormat::Csv);
        assert_eq!(cfg.output, PathBuf::from("verify.csv"));
        assert_eq!(cfg.abs_tol, 1e-10);
    }

    #[test]
    fn long_range_verify_is_rejected() {
        let err = parse_config("command = verify\nn = 1\np = 3.0\ndata = gaussian:1.0\n");
        match err {
            Err(ConfigError::InvalidRun { command: CommandKind::Verify, reason }) => {
                assert!(reason.contains("long-range"), "{reason}");
            }
            other => panic!("expected InvalidRun, got {other:?}"),
        }
        // but pointwise at the same power is fine
        assert!(parse_config("command = pointwise\nn = 1\np = 3.0\ndata = gaussian:1.0\n").is_ok());
    }

    #[test]
    fn unknown_key_is_named() {
        let err = parse_config("command = verify\nfoo = 1\n");
        match err {
            Err(ConfigError::UnknownKey(k)) => assert_eq!(k, "foo"),
            other => panic!("expected UnknownKey, got {other:?}"),
        }
    }

    #[test]
    fn missing_and_malformed() {
        assert!(matches!(
            parse_config("command = verify\nn = 1\ndata = gaussian:1.0\n"),
            Err(ConfigError::MissingKey("p"))
        ));
        assert!(matches!(
            parse_config("command = verify\nn one\n"),
            Err(ConfigError::MalformedLine { line: 2 })
        ));
        assert!(matches!(
            parse_config("command = verify\nn = 1\nn = 2\n"),
            Err(ConfigError::DuplicateKey(_))
        ));
        assert!(matches!(
            parse_config("command = verify\nn = 1\np = 4\ndata = gaussian:-1\n"),
            Err(ConfigError::InvalidValue { key: "data", .. })
        ));
        assert!(matches!(
            parse_config("command = verify\nn = 1\np = 4\ndata = gaussian:1\ngrid = 100:20\n"),
            Err(ConfigError::InvalidValue { key: "grid", .. })
        ));
    }

    #[test]
    fn cutoffs_accumulate_and_validate() {
        let cfg = parse_config(
            "command = divergence\nn = 1\ncutoffs = 10,100\ncutoffs = 1000,10000\n",
        )
        .unwrap();
        assert_eq!(cfg.cutoffs, vec![10.0, 100.0, 1000.0, 10000.0]);
        assert!((cfg.p - 3.0).abs() < 1e-15); // pinned to 1 + 2/n

        assert!(matches!(
            parse_config("command = divergence\nn = 1\ncutoffs = 100,10\n"),
            Err(ConfigError::InvalidValue { key: "cutoffs", .. })
        ));
    }

    #[test]
    fn per_command_cutoff_defaults() {
        let div = parse_config("command = divergence\nn = 1\n").unwrap();
        assert_eq!(div.cutoffs, vec![10.0, 100.0, 1000.0, 10000.0]);
        let comm = parse_config("command = commutation\nn = 1\n").unwrap();
        assert_eq!(comm.cutoffs, vec![0.125, 0.5, 1.0, 2.0, 8.0]);
        let pw = parse_config("command = pointwise\nn = 1\np = 4\ndata = gaussian:1\n").unwrap();
        assert_eq!(pw.cutoffs, vec![0.1, 0.5, 1.0, 2.0, 10.0]);
    }

    #[test]
    fn overlay_prefers_flags() {
        let file = parse_partial("command = verify\nn = 1\np = 4\ndata = gaussian:1\n").unwrap();
        let flags = PartialConfig { p: Some(5.0), ..Default::default() };
        let cfg = resolve(file.overlay(flags)).unwrap();
        assert_eq!(cfg.p, 5.0);
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let cfg = parse_config(
            "# a comment\n\ncommand = verify\nn = 1\np = 4\ndata = gaussian:1.0\n",
        )
        .unwrap();
        assert_eq!(cfg.command, CommandKind::Verify);
    }
}
