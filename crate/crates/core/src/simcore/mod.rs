//! Fixed-timestep simulation of a single targeting trial.
//!
//! Time is simulated, never read from a wall clock: frame `k` starts at
//! `k / frameRate` seconds. Each frame samples input at its start, spends one
//! frame period simulating and rendering, and is presented at the next
//! display refresh boundary; the crosshair row lights half a refresh later.

mod camera;
mod clock;
mod hit;
mod latency;
mod photon;
mod target;
mod trial;
mod vec3;
mod weapon;
mod world;

pub use camera::{apply_mouse, mouse_sensitivity, CameraState, PITCH_LIMIT};
pub(crate) use camera::angle_diff;
pub use clock::FrameClock;
pub use hit::{ray_sphere_hit, Hit};
pub use latency::LatencyQueue;
pub use photon::click_to_photon_model;
pub use target::{spawn_target, target_world_position, update_target, TargetState};
pub use trial::{trial_advance, Outcome, Phase, PhaseDurations, TrialState};
pub use vec3::Vec3;
pub use weapon::{apply_damage, weapon_fire_events, DamageMode, FireResolution, WeaponState};
pub use world::{DisplayedFrame, FrameRecord, TrialSetup, TrialWorld};

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum InputKind {
    MouseDelta { dx: i64, dy: i64 },
    ButtonDown,
    ButtonUp,
}

/// One raw input sample. Timestamps are non-decreasing within a stream.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct InputEvent {
    pub timestamp: f64,
    #[serde(flatten)]
    pub kind: InputKind,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SimError {
    #[error("{0} must be > 0")]
    NonPositive(&'static str),
    #[error("ray direction is not unit length (|d| = {0})")]
    NonUnitDirection(f64),
}
