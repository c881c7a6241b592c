//! Command-line front-end for `phasecorr`.
//!
//! Every command writes one or more CSV files and a JSON [`RunManifest`]
//! next to them. `phasecorr replay <manifest>` re-runs a recorded command and
//! reproduces its CSV files byte for byte.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod expr;
pub mod output;
pub mod params;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;

pub use args::{Cli, Command, Common};
pub use error::CliError;
pub use output::RunManifest;
pub use params::Params;

/// Result of a successful (or partially degenerate) run.
#[derive(Debug, Clone)]
pub struct Report {
    pub manifest: RunManifest,
    pub manifest_path: PathBuf,
    pub degenerate: Vec<String>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Execute resolved parameters and write the manifest.
pub fn run_params(params: Params, workers: usize) -> Result<Report, CliError> {
    if workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let start = Instant::now();
    let written = commands::execute(&params, workers)?;
    let manifest_path = output::manifest_path(params.out(), params.out_is_dir());
    let mut outputs = written.outputs;
    outputs.sort();
    let manifest = RunManifest {
        command: params.command().to_string(),
        seed: params.seed().unwrap_or(phasecorr::montecarlo::DEFAULT_SEED),
        params,
        version: env!("CARGO_PKG_VERSION").to_string(),
        outputs,
        duration_secs: start.elapsed().as_secs_f64(),
    };
    manifest.write(&manifest_path)?;
    Ok(Report {
        manifest,
        manifest_path,
        degenerate: written.degenerate,
    })
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let workers = cli.common.workers.unwrap_or_else(default_workers);
    let params = match &cli.command {
        Command::Replay(r) => {
            let mut params = RunManifest::load(&r.manifest)?.params;
            if let Some(out) = &cli.common.out {
                params.relocate(out.clone());
            }
            params
        }
        command => args::resolve(&cli.common, command)?,
    };
    run_params(params, workers)
}

/// Parse `args` and run, without printing anything.
pub fn run_args<I, T>(args: I) -> Result<Report, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(e.to_string()))?;
    run(&cli)
}

/// Parse `args`, run, print a short report and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(report) => {
            for path in &report.manifest.outputs {
                println!("wrote {}", path.display());
            }
            println!("wrote {}", report.manifest_path.display());
            if report.degenerate.is_empty() {
                error::EXIT_OK
            } else {
                for msg in &report.degenerate {
                    eprintln!("warning: {msg}");
                }
                error::EXIT_NUMERICAL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
