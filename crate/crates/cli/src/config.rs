//! Command-line flags, the TOML config file and their merge into one
//! resolved configuration.

use crate::error::CliError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use cosserat_core::MaterialParameters;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "cosserat", version, about = "Cosserat defect-field scenarios, identity checks and convergence studies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a scenario over a time window and dump fields and residuals.
    Run(CommonArgs),
    /// Run the identity suite across scenarios and emit a JSON verdict.
    Verify(CommonArgs),
    /// Refinement study: residual norms and observed orders per check.
    Convergence(CommonArgs),
}

#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    /// TOML configuration file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub scenario: Option<String>,
    /// Scenario parameter override, `key=value` (repeatable).
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    /// Points per axis (`run`) or a comma-separated list of resolutions
    /// (`convergence`).
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    /// Output directory; without it results go to stdout only.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub format: Vec<Format>,
    /// Restrict to these check families (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Test hook: evaluate the Noether sources with the transposed sign.
    #[arg(long, hide = true)]
    pub inject_sign_error: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub scenario: Option<String>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub material: Option<MaterialParameters>,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub time: TimeSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub tolerance: BTreeMap<String, f64>,
    #[serde(default)]
    pub only: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub points: Option<usize>,
    pub resolutions: Option<Vec<usize>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
    /// Number of recorded snapshots in `run`, endpoints included.
    pub snapshots: Option<usize>,
}

/// Everything a command needs, after defaults, file and flags.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub scenario: Option<String>,
    pub params: BTreeMap<String, f64>,
    pub material: MaterialParameters,
    pub points: usize,
    pub resolutions: Vec<usize>,
    pub t_end: f64,
    pub dt: f64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub formats: Vec<Format>,
    pub snapshots: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: u64,
    pub only: Vec<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub inject_sign_error: bool,
}

pub const DEFAULT_POINTS: usize = 9;
pub const DEFAULT_RESOLUTIONS: [usize; 3] = [17, 33, 65];

/// Pulls `--tol.<check> <v>` / `--tol.<check>=<v>` out of the argument
/// list, since their names are open-ended.
pub fn split_tolerances(args: Vec<OsString>) -> Result<(Vec<OsString>, BTreeMap<String, f64>), CliError> {
    let mut rest = Vec::new();
    let mut tol = BTreeMap::new();
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy().into_owned();
        let Some(spec) = s.strip_prefix("--tol.") else {
            rest.push(a);
            continue;
        };
        let (name, value) = match spec.split_once('=') {
            Some((n, v)) => (n.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| CliError::Usage(format!("--tol.{spec} needs a value")))?;
                (spec.to_string(), v.to_string_lossy().into_owned())
            }
        };
        if name.is_empty() {
            return Err(CliError::Usage("empty check name in --tol.".into()));
        }
        let v: f64 = value
            .parse()
            .map_err(|_| CliError::Usage(format!("--tol.{name}: not a number: {value}")))?;
        if !(v >= 0.0) || !v.is_finite() {
            return Err(CliError::Usage(format!("--tol.{name} must be finite and >= 0")));
        }
        tol.insert(name, v);
    }
    Ok((rest, tol))
}

fn parse_list(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("--grid: not a whole number: {x}")))
        })
        .collect()
}

fn parse_params(items: &[String]) -> Result<BTreeMap<String, f64>, CliError> {
    let mut out = BTreeMap::new();
    for it in items {
        let (k, v) = it
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--param expects key=value, got {it}")))?;
        let v: f64 = v
            .parse()
            .map_err(|_| CliError::Usage(format!("--param {k}: not a number: {v}")))?;
        out.insert(k.to_string(), v);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Run,
    Verify,
    Convergence,
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs, tol_flags: BTreeMap<String, f64>, mode: Mode) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                    path: path.clone(),
                    source: e,
                })?;
                toml::from_str::<FileConfig>(&text)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        let mut params = file.params;
        params.extend(parse_params(&args.params)?);
        let mut tolerances = file.tolerance;
        tolerances.extend(tol_flags);

        let (mut points, mut resolutions) = (
            file.grid.points.unwrap_or(DEFAULT_POINTS),
            file.grid.resolutions.unwrap_or_else(|| DEFAULT_RESOLUTIONS.to_vec()),
        );
        if let Some(g) = &args.grid {
            let list = parse_list(g)?;
            match mode {
                Mode::Convergence => resolutions = list,
                _ if list.len() == 1 => points = list[0],
                _ => return Err(CliError::Usage("--grid takes a single resolution here".into())),
            }
        }
        let scenario = args.scenario.clone().or(file.scenario);
        let cfg = RunConfig {
            scenario,
            params,
            material: file.material.unwrap_or_default(),
            points,
            resolutions,
            t_end: args.t_end.or(file.time.t_end).unwrap_or(1.0),
            dt: args.dt.or(file.time.dt).unwrap_or(1e-3),
            out: args.out.clone().or(file.output.dir),
            formats: if !args.format.is_empty() {
                args.format.clone()
            } else {
                file.output.formats.unwrap_or_else(|| vec![Format::Csv, Format::Json])
            },
            snapshots: file.output.snapshots.unwrap_or(11),
            tolerances,
            seed: args.seed.or(file.seed).unwrap_or(0),
            only: if args.only.is_empty() { file.only } else { args.only.clone() },
            inject_sign_error: args.inject_sign_error,
        };
        cfg.validate(mode)?;
        Ok(cfg)
    }

    fn validate(&self, mode: Mode) -> Result<(), CliError> {
        if self.points < 2 {
            return Err(CliError::Usage(format!("grid needs at least 2 points per axis, got {}", self.points)));
        }
        if mode == Mode::Convergence {
            if self.resolutions.len() < 3 {
                return Err(CliError::Usage("convergence needs at least 3 resolutions".into()));
            }
            if self.resolutions.windows(2).any(|w| w[1] <= w[0]) || self.resolutions[0] < 4 {
                return Err(CliError::Usage(
                    "resolutions must be strictly increasing and at least 4".into(),
                ));
            }
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(CliError::Usage(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return Err(CliError::Usage(format!("t-end must be >= 0, got {}", self.t_end)));
        }
        if self.snapshots < 2 {
            return Err(CliError::Usage("output.snapshots must be at least 2".into()));
        }
        if self.formats.is_empty() {
            return Err(CliError::Usage("no output format selected".into()));
        }
        Ok(())
    }

    /// Number of dt steps covering [0, t_end].
    pub fn steps(&self) -> Result<usize, CliError> {
        let n = (self.t_end / self.dt).round();
        if (n * self.dt - self.t_end).abs() > 1e-9 * self.t_end.max(1.0) {
            return Err(CliError::Usage(format!(
                "t-end {} is not a whole number of steps of {}",
                self.t_end, self.dt
            )));
        }
        Ok(n as usize)
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    pub fn selected(&self, family: &str) -> bool {
        self.only.is_empty() || self.only.iter().any(|o| o == family)
    }

    /// Rejects filters and tolerance names outside `known`.
    pub fn check_names(&self, known: &[&str]) -> Result<(), CliError> {
        for n in self.only.iter().chain(self.tolerances.keys()) {
            if !known.contains(&n.as_str()) {
                return Err(CliError::Usage(format!(
                    "unknown check '{n}'; known: {}",
                    known.join(", ")
                )));
            }
        }
        Ok(())
    }

    pub fn tolerance(&self, family: &str, default: f64) -> f64 {
        self.tolerances.get(family).copied().unwrap_or(default)
    }
}
