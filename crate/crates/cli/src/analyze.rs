use crate::{to_json, write_file, Failure, EXIT_INVALID, EXIT_PARSE};
use fpsci_core::analysis::{
    completion_stats, filter_failures, group_scores, quadratic_fit, read_trials_csv, scatter_fit_svg, split_halves,
    AnalysisError, CompletionStats, FitResult, TrialTable,
};
use serde::Serialize;
use std::fs::File;
use std::path::PathBuf;

#[derive(clap::Args)]
pub struct Args {
    /// trials.csv written by `run`.
    pub results: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub group_size: usize,
    /// Task duration the trials ran with, in seconds; used for scores.
    #[arg(long, default_value_t = 6.0)]
    pub task_duration: f64,
    /// Write the JSON summary here as well as to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write an SVG of completion time per successful trial with the fit.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub trials: usize,
    pub successes: usize,
    pub failures: usize,
    pub group_size: usize,
    pub task_duration: f64,
    pub group_scores: Vec<i64>,
    pub completion: Option<CompletionStats>,
    pub first_half: Option<CompletionStats>,
    pub second_half: Option<CompletionStats>,
    /// Completion time against 1-based successful-trial number.
    pub fit: Option<FitResult>,
}

/// Points for the training curve: (successful-trial number, completion time).
pub fn curve(table: &TrialTable) -> Vec<(f64, f64)> {
    table
        .completion_times()
        .into_iter()
        .enumerate()
        .map(|(i, t)| ((i + 1) as f64, t))
        .collect()
}

pub fn summarize(table: &TrialTable, group_size: usize, task_duration: f64) -> Result<Summary, AnalysisError> {
    let successes = filter_failures(table);
    let halves = split_halves(&successes).ok();
    Ok(Summary {
        trials: table.len(),
        successes: successes.len(),
        failures: table.len() - successes.len(),
        group_size,
        task_duration,
        group_scores: group_scores(table, group_size, task_duration)?,
        completion: completion_stats(&successes).ok(),
        first_half: halves.map(|h| h.0),
        second_half: halves.map(|h| h.1),
        fit: quadratic_fit(&curve(&successes)).ok(),
    })
}

pub fn run(args: &Args) -> Result<(), Failure> {
    let file = File::open(&args.results).map_err(|e| Failure::io(&args.results, e))?;
    let table = read_trials_csv(file).map_err(|e| {
        let code = match e {
            AnalysisError::Io(_) => crate::EXIT_IO,
            _ => EXIT_PARSE,
        };
        Failure::new(code, format!("{}: {e}", args.results.display()))
    })?;
    let summary = summarize(&table, args.group_size, args.task_duration)
        .map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    if let Some(path) = &args.plot {
        let svg = scatter_fit_svg(
            &curve(&table),
            summary.fit.as_ref(),
            "completion time per successful trial",
            "successful trial",
            "completion time (s)",
        );
        write_file(path, svg.as_bytes())?;
    }
    let json = to_json(&summary);
    if let Some(path) = &args.out {
        write_file(path, json.as_bytes())?;
    }
    print!("{json}");
    Ok(())
}
