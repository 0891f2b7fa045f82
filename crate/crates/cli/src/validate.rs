use crate::{read_config, Failure};
use std::path::PathBuf;

#[derive(clap::Args)]
pub struct Args {
    /// Experiment config (AnyLite).
    pub config: PathBuf,
}

pub fn run(args: &Args) -> Result<(), Failure> {
    let config = read_config(&args.config)?;
    let trials: u64 = config.sessions.iter().map(|s| s.trial_count()).sum();
    println!(
        "{}: ok ({} target motions, {} sessions, {} trials)",
        args.config.display(),
        config.targets.len(),
        config.sessions.len(),
        trials
    );
    Ok(())
}
