//! Trial logs and the summary quantities computed from them.

mod fit;
mod plot;
mod stats;
mod synth;
mod table;

pub use fit::{quadratic_fit, FitResult};
pub use plot::{histogram_svg, scatter_fit_svg};
pub use stats::{
    completion_stats, filter_failures, group_scores, latency_summary, split_halves, summarize_times,
    CompletionStats, HistogramBin, LatencySummary,
};
pub use synth::{planted_trend, PlantedTrend};
pub use table::{read_trials_csv, write_trials_csv, TrialOutcome, TrialRecord, TrialTable, CSV_COLUMNS};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum AnalysisError {
    #[error("need at least {needed} successful trials, found {have}")]
    InsufficientData { needed: usize, have: usize },
    #[error("group size must be at least 1")]
    GroupSize,
    #[error("quadratic fit needs at least 3 distinct x values, found {0}")]
    Degenerate(usize),
    #[error("no latency samples")]
    Empty,
    #[error("non-finite value {0}")]
    NonFinite(f64),
    #[error("row {row}: {message}")]
    BadRow { row: usize, message: String },
    #[error("line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("{0}")]
    Io(String),
}
