mod analyze;
mod latency;
mod run;
mod validate;

use clap::{Parser, Subcommand};
use fpsci_core::anyconf::{self, Value};
use fpsci_core::experiment::{load_experiment, ExperimentConfig};
use std::fs;
use std::path::Path;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fpsci", version, about = "Headless first-person targeting experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an experiment config and report problems.
    Validate(validate::Args),
    /// Run the next (or a named) session for a user with the synthetic player.
    Run(run::Args),
    /// Summarize a trials.csv file.
    Analyze(analyze::Args),
    /// Report the modelled click-to-photon latency distribution.
    Latency(latency::Args),
}

/// A command failure and the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub const EXIT_IO: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_INVALID: u8 = 3;

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        Failure::new(EXIT_IO, format!("{}: {err}", path.display()))
    }
}

pub fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

/// Reads and parses an AnyLite file; syntax errors map to exit code 2.
pub fn read_tree(path: &Path) -> Result<Value, Failure> {
    let text = read_text(path)?;
    anyconf::parse(&text).map_err(|diags| {
        let lines: Vec<String> = diags.iter().map(|d| format!("{}:{d}", path.display())).collect();
        Failure::new(EXIT_PARSE, lines.join("\n"))
    })
}

/// Parses and validates an experiment config, printing warnings to stderr.
pub fn read_config(path: &Path) -> Result<ExperimentConfig, Failure> {
    let tree = read_tree(path)?;
    match load_experiment(&tree) {
        Ok(loaded) => {
            for w in &loaded.warnings {
                eprintln!("{}: {w}", path.display());
            }
            Ok(loaded.value)
        }
        Err(diags) => {
            let lines: Vec<String> = diags.iter().map(|d| format!("{}: {d}", path.display())).collect();
            Err(Failure::new(EXIT_INVALID, lines.join("\n")))
        }
    }
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = Path::new(&tmp);
    fs::write(tmp, contents).map_err(|e| Failure::io(tmp, e))?;
    fs::rename(tmp, path).map_err(|e| Failure::io(path, e))
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::io(path, e))
}

pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("summaries serialize");
    s.push('\n');
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate(a) => validate::run(&a),
        Command::Run(a) => run::run(&a),
        Command::Analyze(a) => analyze::run(&a),
        Command::Latency(a) => latency::run(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}
