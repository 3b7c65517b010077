//! Command-line surface for the Cosserat defect-field library: `run`,
//! `verify` and `convergence`.
//!
//! Exit status: 0 when every check passes, 1 on a check failure, 2 on a
//! usage or configuration error.

pub mod checks;
pub mod config;
pub mod convergence;
pub mod error;
pub mod output;
pub mod run;
pub mod verify;

use clap::error::ErrorKind;
use clap::Parser;
use config::{split_tolerances, Cli, Command, Mode, RunConfig};
use error::CliError;
use output::Artifacts;
use std::ffi::OsString;
use std::io::Write;

/// Result of one command before anything is written.
pub struct Outcome {
    pub command: &'static str,
    pub passed: bool,
    /// Human-readable summary.
    pub stdout: String,
    /// Machine-readable report, printed instead of the summary when JSON
    /// is the only format and no output directory is set.
    pub json: Option<Vec<u8>>,
    pub artifacts: Artifacts,
}

/// Parses `args` (program name first), runs the command, writes
/// artifacts and returns the exit status.
pub fn main_with_args(args: Vec<OsString>) -> i32 {
    let (args, tol) = match split_tolerances(args) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match execute(cli, tol) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, tol: std::collections::BTreeMap<String, f64>) -> Result<i32, CliError> {
    let (args, mode) = match &cli.command {
        Command::Run(a) => (a, Mode::Run),
        Command::Verify(a) => (a, Mode::Verify),
        Command::Convergence(a) => (a, Mode::Convergence),
    };
    let cfg = RunConfig::resolve(args, tol, mode)?;
    let out = match mode {
        Mode::Run => run::cmd_run(&cfg)?,
        Mode::Verify => verify::cmd_verify(&cfg)?,
        Mode::Convergence => convergence::cmd_convergence(&cfg)?,
    };
    if let Some(dir) = &cfg.out {
        out.artifacts.write(dir, out.command, &cfg, out.passed)?;
    }
    let mut stdout = std::io::stdout().lock();
    let text = match (&out.json, cfg.out.is_none() && cfg.formats == [config::Format::Json]) {
        (Some(j), true) => j.clone(),
        _ => out.stdout.into_bytes(),
    };
    let _ = stdout.write_all(&text);
    Ok(if out.passed { 0 } else { 1 })
}
