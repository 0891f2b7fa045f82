//! Deterministic headless engine for first-person targeting experiments:
//! configuration, trial scheduling, frame-accurate simulation with injected
//! latency, synthetic players and result analysis.

pub mod agent;
pub mod analysis;
pub mod anyconf;
pub mod experiment;
pub mod psychophys;
pub mod runner;
pub mod seed;
pub mod simcore;
