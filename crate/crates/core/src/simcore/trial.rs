const TIME_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Phase {
    Ready,
    Task,
    Feedback,
    Done,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Outcome {
    Pending,
    Success,
    Failure,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseDurations {
    pub ready: f64,
    pub task: f64,
    pub feedback: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialState {
    pub phase: Phase,
    pub phase_start: f64,
    pub outcome: Outcome,
    pub completion_time: Option<f64>,
    pub shots_fired: u32,
    pub shots_hit: u32,
}

impl TrialState {
    pub fn new(start: f64) -> Self {
        TrialState {
            phase: Phase::Ready,
            phase_start: start,
            outcome: Outcome::Pending,
            completion_time: None,
            shots_fired: 0,
            shots_hit: 0,
        }
    }
}

/// Advances the phase machine to time `now`.
///
/// `target_destroyed` reports whether the target's health reached zero by
/// `now`. Zero-length phases are passed through in one call, so the result
/// is never a phase whose duration has already elapsed.
pub fn trial_advance(
    trial: &TrialState,
    durations: &PhaseDurations,
    now: f64,
    target_destroyed: bool,
) -> TrialState {
    let mut t = trial.clone();
    loop {
        let elapsed = now - t.phase_start;
        match t.phase {
            Phase::Ready if elapsed >= durations.ready - TIME_EPS => {
                t.phase = Phase::Task;
                t.phase_start = now;
            }
            Phase::Task if target_destroyed && elapsed <= durations.task + TIME_EPS => {
                t.outcome = Outcome::Success;
                t.completion_time = Some(elapsed.min(durations.task));
                t.phase = Phase::Feedback;
                t.phase_start = now;
            }
            Phase::Task if target_destroyed || elapsed >= durations.task - TIME_EPS => {
                t.outcome = Outcome::Failure;
                t.phase = Phase::Feedback;
                t.phase_start = now;
            }
            Phase::Feedback if elapsed >= durations.feedback - TIME_EPS => {
                t.phase = Phase::Done;
                t.phase_start = now;
            }
            _ => return t,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const D: PhaseDurations = PhaseDurations {
        ready: 0.5,
        task: 6.0,
        feedback: 1.0,
    };

    fn in_task() -> TrialState {
        let t = trial_advance(&TrialState::new(0.0), &D, 0.5, false);
        assert_eq!(t.phase, Phase::Task);
        assert_eq!(t.phase_start, 0.5);
        t
    }

    #[test]
    fn ready_waits() {
        let t = trial_advance(&TrialState::new(0.0), &D, 0.25, false);
        assert_eq!(t.phase, Phase::Ready);
    }

    #[test]
    fn destroy_is_success() {
        let t = trial_advance(&in_task(), &D, 0.5 + 1.3, true);
        assert_eq!(t.outcome, Outcome::Success);
        assert!((t.completion_time.unwrap() - 1.3).abs() < 1e-12);
        assert_eq!(t.phase, Phase::Feedback);
    }

    #[test]
    fn timeout_is_failure() {
        let t = trial_advance(&in_task(), &D, 0.5 + 5.99, false);
        assert_eq!(t.outcome, Outcome::Pending);
        let t = trial_advance(&in_task(), &D, 0.5 + 6.0, false);
        assert_eq!(t.outcome, Outcome::Failure);
        assert_eq!(t.completion_time, None);
    }

    #[test]
    fn late_destroy_is_failure() {
        let t = trial_advance(&in_task(), &D, 0.5 + 6.01, true);
        assert_eq!(t.outcome, Outcome::Failure);
    }

    #[test]
    fn feedback_lasts_ceil_frames() {
        let dt = 1.0 / 60.0;
        let d = PhaseDurations {
            ready: 0.0,
            task: 6.0,
            feedback: 0.105, // 6.3 frames -> 7
        };
        let mut t = trial_advance(&TrialState::new(0.0), &d, 0.0, false);
        assert_eq!(t.phase, Phase::Task);
        t = trial_advance(&t, &d, 10.0 * dt, true);
        assert_eq!(t.phase, Phase::Feedback);
        let mut frames = 0;
        let mut k = 10;
        while t.phase == Phase::Feedback {
            k += 1;
            frames += 1;
            t = trial_advance(&t, &d, k as f64 * dt, true);
        }
        assert_eq!(frames, 7);
        assert_eq!(t.phase, Phase::Done);
    }

    #[test]
    fn zero_length_phases_collapse() {
        let d = PhaseDurations {
            ready: 0.0,
            task: 1.0,
            feedback: 0.0,
        };
        let t = trial_advance(&TrialState::new(0.0), &d, 0.0, false);
        assert_eq!(t.phase, Phase::Task);
        let t = trial_advance(&t, &d, 1.0, false);
        assert_eq!(t.phase, Phase::Done);
        assert_eq!(t.outcome, Outcome::Failure);
    }
}
