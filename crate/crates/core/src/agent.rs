//! Synthetic players that close the loop in place of a human subject.
//!
//! The agent sees the target only through frames that reached the display,
//! reaction time later. It tracks its own commanded view (an efference copy of
//! every count it has sent) so pursuit stays stable regardless of how long
//! input takes to reach the screen; injected delay shows up instead as shots
//! that land later, against a target that has moved on.

use crate::seed::SimRng;
use crate::simcore::{apply_mouse, CameraState, DisplayedFrame, InputEvent, InputKind};
use rand_distr::{Distribution, Normal};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AgentParams {
    /// Seconds between a frame lighting up and the agent acting on it.
    pub reaction_time: f64,
    /// Fraction of the remaining error corrected per second.
    pub pursuit_gain: f64,
    /// Degrees per second.
    pub max_turn_rate: f64,
    /// Per-frame, per-axis Gaussian aim noise in degrees.
    pub motor_noise_sigma: f64,
    /// Fire when the error is below this many target angular radii.
    pub fire_threshold: f64,
    pub seed: u64,
}

impl Default for AgentParams {
    fn default() -> Self {
        AgentParams {
            reaction_time: 0.2,
            pursuit_gain: 6.0,
            max_turn_rate: 300.0,
            motor_noise_sigma: 0.15,
            fire_threshold: 1.0,
            seed: 0,
        }
    }
}

impl AgentParams {
    /// Reaction time rounded to whole frames, in seconds.
    pub fn quantized_reaction(&self, frame_period: f64) -> f64 {
        (self.reaction_time / frame_period).round() * frame_period
    }
}

/// The most recent displayed frame that lit up at or before
/// `now - reaction_time`, or the oldest one while history is still short.
pub fn agent_observe(displayed: &[DisplayedFrame], now: f64, reaction_time: f64) -> Option<&DisplayedFrame> {
    let cutoff = now - reaction_time + 1e-9;
    // photon times are increasing
    let n = displayed.partition_point(|f| f.photon_time <= cutoff);
    if n == 0 {
        displayed.first()
    } else {
        Some(&displayed[n - 1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriggerMode {
    /// Hold the button while on target; for auto-fire weapons.
    Hold,
    /// Click repeatedly while on target; for single-shot weapons.
    Tap,
}

pub struct Agent {
    params: AgentParams,
    sensitivity: f64,
    mode: TriggerMode,
    intended: CameraState,
    carry: (f64, f64),
    commanded: (f64, f64),
    emitted: (i64, i64),
    trigger_down: bool,
    noise: Option<Normal<f64>>,
    rng: SimRng,
}

impl Agent {
    pub fn new(params: AgentParams, sensitivity: f64, camera: CameraState, mode: TriggerMode, rng: SimRng) -> Self {
        let noise = (params.motor_noise_sigma > 0.0)
            .then(|| Normal::new(0.0, params.motor_noise_sigma).expect("finite sigma"));
        Agent {
            params,
            sensitivity,
            mode,
            intended: camera,
            carry: (0.0, 0.0),
            commanded: (0.0, 0.0),
            emitted: (0, 0),
            trigger_down: false,
            noise,
            rng,
        }
    }

    pub fn params(&self) -> &AgentParams {
        &self.params
    }

    /// The view the agent expects once all of its input has been applied.
    pub fn intended_camera(&self) -> &CameraState {
        &self.intended
    }

    /// Total (yaw, pitch) rotation requested so far, in degrees.
    pub fn commanded_rotation(&self) -> (f64, f64) {
        self.commanded
    }

    /// Total (dx, dy) mouse counts sent so far.
    pub fn emitted_counts(&self) -> (i64, i64) {
        self.emitted
    }

    pub fn trigger_down(&self) -> bool {
        self.trigger_down
    }

    /// One control step; the returned events carry timestamp `now`.
    pub fn act(&mut self, observation: Option<&DisplayedFrame>, dt: f64, now: f64) -> Vec<InputEvent> {
        let mut out = Vec::new();
        let seen = observation.and_then(|f| Some((f.target_direction?, f.target_angular_radius?)));
        let Some((target, radius)) = seen else {
            self.set_trigger(false, now, &mut out);
            return out;
        };

        let (yaw_cmd, pitch_cmd) = self.pursuit(target, dt);
        self.commanded.0 += yaw_cmd;
        self.commanded.1 += pitch_cmd;
        self.carry.0 += yaw_cmd / self.sensitivity;
        self.carry.1 -= pitch_cmd / self.sensitivity;
        let dx = self.carry.0.round();
        let dy = self.carry.1.round();
        self.carry.0 -= dx;
        self.carry.1 -= dy;
        let (dx, dy) = (dx as i64, dy as i64);
        if dx != 0 || dy != 0 {
            self.emitted.0 += dx;
            self.emitted.1 += dy;
            self.intended = apply_mouse(&self.intended, dx, dy, self.sensitivity);
            out.push(InputEvent {
                timestamp: now,
                kind: InputKind::MouseDelta { dx, dy },
            });
        }

        let error = self.intended.direction().angle_to(target);
        let on_target = error < self.params.fire_threshold * radius;
        match (self.mode, on_target, self.trigger_down) {
            (TriggerMode::Tap, true, true) => self.set_trigger(false, now, &mut out),
            (_, want, _) => self.set_trigger(want, now, &mut out),
        }
        out
    }

    /// Commanded (yaw, pitch) step toward `target`, noise included.
    fn pursuit(&mut self, target: crate::simcore::Vec3, dt: f64) -> (f64, f64) {
        let view = self.intended.direction();
        let error = view.angle_to(target);
        let (az, el) = target.to_angles();
        let d_yaw = crate::simcore::angle_diff(az, self.intended.yaw);
        let d_pitch = el - self.intended.pitch;
        let span = d_yaw.hypot(d_pitch);
        let (mut yaw, mut pitch) = (0.0, 0.0);
        if error > 0.0 && span > 0.0 {
            let step = (self.params.pursuit_gain * error).min(self.params.max_turn_rate) * dt;
            let step = step.min(span);
            yaw = d_yaw / span * step;
            pitch = d_pitch / span * step;
        }
        if let Some(noise) = &self.noise {
            yaw += noise.sample(&mut self.rng);
            pitch += noise.sample(&mut self.rng);
        }
        (yaw, pitch)
    }

    fn set_trigger(&mut self, down: bool, now: f64, out: &mut Vec<InputEvent>) {
        if down == self.trigger_down {
            return;
        }
        self.trigger_down = down;
        out.push(InputEvent {
            timestamp: now,
            kind: if down { InputKind::ButtonDown } else { InputKind::ButtonUp },
        });
    }
}
