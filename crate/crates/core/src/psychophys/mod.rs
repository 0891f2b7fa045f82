//! Stimulus-level management: constant-stimuli schedules, the transformed
//! up-down staircase, and in-session trial ordering.

mod constant;
mod staircase;

pub use constant::{make_constant_schedule, order_trials, ConstantStimuliSchedule, ScheduleEntry};
pub use staircase::{Direction, Response, StaircaseConfig, StaircaseState};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PsychophysError {
    #[error("repetitions must be at least 1")]
    NoRepetitions,
    #[error("at least one stimulus level is required")]
    NoLevels,
    #[error("invalid staircase: {0}")]
    InvalidStaircase(String),
    #[error("staircase already complete")]
    StaircaseComplete,
    #[error("need {needed} reversals for a threshold estimate, have {have}")]
    InsufficientReversals { needed: usize, have: usize },
}
