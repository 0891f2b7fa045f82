//! Closed-loop session execution: the agent plays every trial of a session.

use crate::agent::{agent_observe, Agent, AgentParams, TriggerMode};
use crate::analysis::{TrialOutcome, TrialRecord};
use crate::experiment::{ExperimentConfig, SessionSpec};
use crate::psychophys::{order_trials, PsychophysError, Response, StaircaseState};
use crate::seed;
use crate::simcore::{CameraState, FrameRecord, Outcome, SimError, TrialSetup, TrialWorld};
use serde::Serialize;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RunError {
    #[error("unknown target motion `{0}`")]
    UnknownTarget(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Staircase(#[from] PsychophysError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialResult {
    pub outcome: Outcome,
    pub completion_time: Option<f64>,
    pub shots_fired: u32,
    pub shots_hit: u32,
    pub frames: u64,
}

/// Plays one trial to completion with the agent, passing each frame to `sink`.
pub fn run_trial(
    setup: TrialSetup,
    params: &AgentParams,
    stream: u64,
    mut sink: impl FnMut(&FrameRecord),
) -> Result<TrialResult, RunError> {
    let mode = if setup.weapon.auto_fire {
        TriggerMode::Hold
    } else {
        TriggerMode::Tap
    };
    let mut agent = Agent::new(
        *params,
        setup.sensitivity,
        setup.initial_camera,
        mode,
        seed::rng(seed::mix(stream, &[params.seed])),
    );
    let mut world = TrialWorld::new(setup, seed::rng(stream))?;
    let dt = world.clock().frame_period();
    let reaction = params.quantized_reaction(dt);
    while !world.is_done() {
        let n = world.frame_index();
        let events = if n == 0 {
            Vec::new()
        } else {
            // decided halfway through the previous frame, sampled at this one's start
            let now = (n as f64 - 0.5) * dt;
            let seen = agent_observe(world.displayed(), now, reaction);
            agent.act(seen, dt, now)
        };
        let record = world.step_frame(&events);
        sink(&record);
    }
    let t = world.trial();
    Ok(TrialResult {
        outcome: t.outcome,
        completion_time: t.completion_time,
        shots_fired: t.shots_fired,
        shots_hit: t.shots_hit,
        frames: world.frame_index(),
    })
}

/// Trajectory of a session's staircase.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StaircaseLog {
    pub parameter: String,
    /// Level presented on each staircase trial, in order.
    pub levels: Vec<f64>,
    pub reversals: Vec<f64>,
    pub complete: bool,
    pub threshold: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SessionRun {
    pub records: Vec<TrialRecord>,
    pub staircase: Option<StaircaseLog>,
}

/// Seed of the session's trial-order shuffle.
pub fn order_seed(master: u64, user_id: &str, session_id: &str) -> u64 {
    seed::mix(
        master,
        &[seed::text_hash(user_id), seed::text_hash(session_id), seed::text_hash("order")],
    )
}

/// Runs every trial of `session` for one user. Frames go to `sink` tagged
/// with their trial index.
pub fn run_session(
    config: &ExperimentConfig,
    session: &SessionSpec,
    user_id: &str,
    sensitivity: f64,
    master_seed: u64,
    mut sink: impl FnMut(u64, &FrameRecord),
) -> Result<SessionRun, RunError> {
    let sets: Vec<(String, u32)> = session
        .trials
        .iter()
        .map(|t| (t.target_motion_id.clone(), t.count))
        .collect();
    let order = order_trials(&sets, order_seed(master_seed, user_id, session.id.as_str()));

    let mut stair = match &session.staircase {
        Some(s) => Some((s, StaircaseState::new(s.config.clone())?, Vec::new())),
        None => None,
    };

    let mut records = Vec::with_capacity(order.len());
    for (i, target_id) in order.iter().enumerate() {
        let index = i as u64;
        let base = config
            .target(target_id)
            .ok_or_else(|| RunError::UnknownTarget(target_id.clone()))?;
        let on_staircase = stair.as_ref().is_some_and(|(s, _, _)| &s.target_id == target_id);
        let target = match &mut stair {
            Some((s, state, levels)) if on_staircase => {
                levels.push(state.current_level);
                base.with_level(s.field, state.current_level)
            }
            _ => base.clone(),
        };
        let setup = TrialSetup {
            frame_rate: session.frame_rate,
            refresh_rate: session.refresh_rate,
            delay_frames: session.frame_delay,
            durations: config.durations(),
            weapon: config.weapon.clone(),
            target,
            target_health: config.target_health,
            sensitivity,
            initial_camera: CameraState::default(),
        };
        let stream = seed::trial_stream(master_seed, user_id, &session.id, index);
        let result = run_trial(setup, &session.agent, stream, |f| sink(index, f))?;
        let success = result.outcome == Outcome::Success;

        if on_staircase {
            if let Some((_, state, _)) = &mut stair {
                if !state.is_complete() {
                    let response = if success {
                        Response::Correct
                    } else {
                        Response::Incorrect
                    };
                    *state = state.step(response)?;
                }
            }
        }

        records.push(TrialRecord {
            trial_index: index,
            session_id: session.id.clone(),
            session_kind: session.kind.as_str().to_string(),
            target_motion_id: target_id.clone(),
            frame_rate: session.frame_rate,
            frame_delay: session.frame_delay,
            outcome: if success {
                TrialOutcome::Success
            } else {
                TrialOutcome::Failure
            },
            completion_time_sec: result.completion_time.filter(|_| success),
            shots_fired: result.shots_fired,
            shots_hit: result.shots_hit,
            seed_stream: stream,
        });
    }

    let staircase = stair.map(|(s, state, levels)| StaircaseLog {
        parameter: s.parameter_path(),
        levels,
        reversals: state.reversals.clone(),
        complete: state.is_complete(),
        threshold: state.threshold().ok(),
    });
    Ok(SessionRun { records, staircase })
}
