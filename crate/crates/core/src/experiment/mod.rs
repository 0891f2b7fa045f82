//! Experiment, user and progress configuration.
//!
//! Three AnyLite file kinds are handled here: the experiment config
//! (`*.exp.any`), the user table (`users.any`) and per-experiment user status
//! (`status.any`).  Loading validates and fills defaults; every problem is
//! reported against the key path that caused it.

mod load;
mod reader;
mod users;

pub use load::{experiment_to_value, load_experiment, DEFAULTS};
pub use users::{
    load_status, load_users, mark_completed, next_session, session_order, status_to_value,
    users_to_value, StatusFile, UserRecord, UserStatus,
};

use crate::agent::AgentParams;
use crate::anyconf::Severity;
use crate::psychophys::StaircaseConfig;
use std::fmt;

/// Inclusive `[min, max]` parameter range; `min == max` is a fixed value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    pub const fn fixed(v: f64) -> Self {
        Range { min: v, max: v }
    }

    pub const fn new(min: f64, max: f64) -> Self {
        Range { min, max }
    }

    pub fn is_fixed(&self) -> bool {
        self.min == self.max
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ammo {
    Limited(u32),
    Unlimited,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeaponSpec {
    pub ammo_per_trial: Ammo,
    /// Seconds between shots.
    pub fire_period: f64,
    /// Health units per second of sustained fire.
    pub damage_per_second: f64,
    /// Keep firing while the trigger is held.
    pub auto_fire: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TargetMotionSpec {
    pub id: String,
    /// Degrees per second.
    pub speed: Range,
    /// Seconds between speed/direction changes.
    pub motion_change_period: Range,
    pub distance: Range,
    pub visual_radius: Range,
    /// Degrees.
    pub spawn_azimuth: Range,
    /// Degrees.
    pub spawn_elevation: Range,
    pub horizontal_lock: bool,
    pub jump_enabled: bool,
    pub jump_speed: Range,
    pub jump_period: Range,
    pub gravity: f64,
}

/// Ranged target parameters a staircase may drive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetField {
    Speed,
    MotionChangePeriod,
    Distance,
    VisualRadius,
    SpawnAzimuth,
    SpawnElevation,
    JumpSpeed,
    JumpPeriod,
}

impl TargetField {
    pub const ALL: [TargetField; 8] = [
        TargetField::Speed,
        TargetField::MotionChangePeriod,
        TargetField::Distance,
        TargetField::VisualRadius,
        TargetField::SpawnAzimuth,
        TargetField::SpawnElevation,
        TargetField::JumpSpeed,
        TargetField::JumpPeriod,
    ];

    pub fn key(self) -> &'static str {
        match self {
            TargetField::Speed => "speed",
            TargetField::MotionChangePeriod => "motionChangePeriod",
            TargetField::Distance => "distance",
            TargetField::VisualRadius => "visualRadius",
            TargetField::SpawnAzimuth => "spawnAzimuth",
            TargetField::SpawnElevation => "spawnElevation",
            TargetField::JumpSpeed => "jumpSpeed",
            TargetField::JumpPeriod => "jumpPeriod",
        }
    }

    pub fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.key() == key)
    }
}

impl TargetMotionSpec {
    pub fn range(&self, field: TargetField) -> Range {
        match field {
            TargetField::Speed => self.speed,
            TargetField::MotionChangePeriod => self.motion_change_period,
            TargetField::Distance => self.distance,
            TargetField::VisualRadius => self.visual_radius,
            TargetField::SpawnAzimuth => self.spawn_azimuth,
            TargetField::SpawnElevation => self.spawn_elevation,
            TargetField::JumpSpeed => self.jump_speed,
            TargetField::JumpPeriod => self.jump_period,
        }
    }

    pub fn range_mut(&mut self, field: TargetField) -> &mut Range {
        match field {
            TargetField::Speed => &mut self.speed,
            TargetField::MotionChangePeriod => &mut self.motion_change_period,
            TargetField::Distance => &mut self.distance,
            TargetField::VisualRadius => &mut self.visual_radius,
            TargetField::SpawnAzimuth => &mut self.spawn_azimuth,
            TargetField::SpawnElevation => &mut self.spawn_elevation,
            TargetField::JumpSpeed => &mut self.jump_speed,
            TargetField::JumpPeriod => &mut self.jump_period,
        }
    }

    /// Copy of the spec with `field` pinned to a single value.
    pub fn with_level(&self, field: TargetField, level: f64) -> Self {
        let mut spec = self.clone();
        *spec.range_mut(field) = Range::fixed(level);
        spec
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SessionKind {
    Training,
    Real,
}

impl SessionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SessionKind::Training => "training",
            SessionKind::Real => "real",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialSet {
    pub target_motion_id: String,
    pub count: u32,
}

/// Staircase bound to one ranged field of one target motion.
#[derive(Clone, Debug, PartialEq)]
pub struct SessionStaircase {
    pub target_id: String,
    pub field: TargetField,
    pub config: StaircaseConfig,
}

impl SessionStaircase {
    pub fn parameter_path(&self) -> String {
        format!("targets/{}/{}", self.target_id, self.field.key())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SessionSpec {
    pub id: String,
    pub kind: SessionKind,
    pub frame_rate: f64,
    pub frame_delay: u32,
    pub refresh_rate: f64,
    pub trials: Vec<TrialSet>,
    pub staircase: Option<SessionStaircase>,
    pub agent: AgentParams,
}

impl SessionSpec {
    pub fn trial_count(&self) -> u64 {
        self.trials.iter().map(|t| u64::from(t.count)).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub description: String,
    pub ready_duration: f64,
    pub task_duration: f64,
    pub feedback_duration: f64,
    pub target_health: f64,
    pub weapon: WeaponSpec,
    pub targets: Vec<TargetMotionSpec>,
    pub sessions: Vec<SessionSpec>,
}

impl ExperimentConfig {
    pub fn target(&self, id: &str) -> Option<&TargetMotionSpec> {
        self.targets.iter().find(|t| t.id == id)
    }

    pub fn session(&self, id: &str) -> Option<&SessionSpec> {
        self.sessions.iter().find(|s| s.id == id)
    }

    pub fn durations(&self) -> crate::simcore::PhaseDurations {
        crate::simcore::PhaseDurations {
            ready: self.ready_duration,
            task: self.task_duration,
            feedback: self.feedback_duration,
        }
    }
}

/// A validation message tied to a key path such as `targets[0].speed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigDiagnostic {
    pub severity: Severity,
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}: {}", self.severity, self.message)
        } else {
            write!(f, "{}: {}: {}", self.severity, self.path, self.message)
        }
    }
}

/// Result of a successful load: the value plus any warnings.
#[derive(Clone, Debug, PartialEq)]
pub struct Loaded<T> {
    pub value: T,
    pub warnings: Vec<ConfigDiagnostic>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ProgressError {
    #[error("unknown session `{0}`")]
    UnknownSession(String),
    #[error("session order for user `{0}` is not a permutation of the experiment's sessions")]
    BadOrder(String),
}
