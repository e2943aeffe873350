//! Command-line front end: configuration, dispatch and output files.

pub mod args;
pub mod config;
mod run;

use std::ffi::OsString;
use std::path::Path;

use clap::Parser;
use serde::Serialize;

pub use args::Cli;
pub use config::{parse_config, Command, RunConfig};
pub use run::{dispatch, Outcome};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Run(#[from] monokit::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Run(_) | CliError::Io(_) => EXIT_FAIL,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Run(_) => "run",
            CliError::Io(_) => "io",
        }
    }
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: String,
}

fn error_json(err: &CliError) -> String {
    let record = ErrorRecord {
        error: err.kind(),
        message: err.to_string(),
    };
    serde_json::to_string_pretty(&record).expect("error record serializes") + "\n"
}

/// Full program: parse, run, report. Returns the process exit code.
pub fn main_with_args<I, T>(args: I, env_seed: Option<&str>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match parse_config(&cli, env_seed) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match run_with_threads(&cfg) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            let json = error_json(&e);
            eprint!("{json}");
            if let Err(io) = write_file(&cfg.output_path, "error.json", &json) {
                eprintln!("error: {io}");
            }
            e.exit_code()
        }
    }
}

fn run_with_threads(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
            pool.install(|| dispatch(cfg))
        }
        None => dispatch(cfg),
    }
}

pub(crate) fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
