use super::*;
use crate::experiment::{TargetMotionSpec, WeaponSpec};
use crate::seed::SimRng;

/// Everything needed to simulate one trial.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialSetup {
    pub frame_rate: f64,
    pub refresh_rate: f64,
    pub delay_frames: u32,
    pub durations: PhaseDurations,
    pub weapon: WeaponSpec,
    pub target: TargetMotionSpec,
    pub target_health: f64,
    /// Degrees per mouse count.
    pub sensitivity: f64,
    pub initial_camera: CameraState,
}

/// What the player could see once a frame reached the screen.
#[derive(Clone, Debug, PartialEq)]
pub struct DisplayedFrame {
    pub frame_index: u64,
    pub photon_time: f64,
    pub camera: CameraState,
    /// Unit direction from the camera to the target centre, when visible.
    pub target_direction: Option<Vec3>,
    /// Angular radius of the target in degrees, when visible.
    pub target_angular_radius: Option<f64>,
}

/// One line of the per-frame log.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FrameRecord {
    pub frame_index: u64,
    pub sim_time: f64,
    pub photon_time: Option<f64>,
    pub phase: Phase,
    pub yaw: f64,
    pub pitch: f64,
    pub target_azimuth: Option<f64>,
    pub target_elevation: Option<f64>,
    pub target_offset: Option<f64>,
    pub target_health: Option<f64>,
    pub events: Vec<InputEvent>,
    pub shots: u32,
    pub hits: u32,
    pub dry_fire: bool,
}

/// Simulation state of a running trial.
///
/// Each [`TrialWorld::step_frame`] call runs one frame of the pipeline:
/// queue raw input, release delayed input, turn the camera, resolve fire and
/// hits against the target's current pose, apply damage, move the target,
/// advance the trial phase, then work out when (if ever) the frame is shown.
pub struct TrialWorld {
    setup: TrialSetup,
    clock: FrameClock,
    queue: LatencyQueue<InputEvent>,
    camera: CameraState,
    weapon: WeaponState,
    target: Option<TargetState>,
    trial: TrialState,
    rng: SimRng,
    displayed: Vec<DisplayedFrame>,
}

impl TrialWorld {
    pub fn new(setup: TrialSetup, rng: SimRng) -> Result<Self, SimError> {
        let clock = FrameClock::new(setup.frame_rate, setup.refresh_rate)?;
        if setup.sensitivity.is_nan() || setup.sensitivity <= 0.0 {
            return Err(SimError::NonPositive("sensitivity"));
        }
        let mut world = TrialWorld {
            queue: LatencyQueue::new(setup.delay_frames),
            camera: setup.initial_camera,
            weapon: WeaponState::new(&setup.weapon),
            target: None,
            trial: TrialState::new(0.0),
            clock,
            rng,
            displayed: Vec::new(),
            setup,
        };
        // a zero ready phase starts the task immediately
        world.advance_phase(0.0);
        Ok(world)
    }

    pub fn setup(&self) -> &TrialSetup {
        &self.setup
    }

    pub fn clock(&self) -> &FrameClock {
        &self.clock
    }

    pub fn frame_index(&self) -> u64 {
        self.clock.frame_index()
    }

    pub fn camera(&self) -> &CameraState {
        &self.camera
    }

    pub fn target(&self) -> Option<&TargetState> {
        self.target.as_ref()
    }

    pub fn trial(&self) -> &TrialState {
        &self.trial
    }

    pub fn weapon(&self) -> &WeaponState {
        &self.weapon
    }

    pub fn is_done(&self) -> bool {
        self.trial.phase == Phase::Done
    }

    /// Frames that reached the display so far, oldest first.
    pub fn displayed(&self) -> &[DisplayedFrame] {
        &self.displayed
    }

    fn advance_phase(&mut self, now: f64) {
        let destroyed = self.target.as_ref().is_some_and(TargetState::is_destroyed);
        let before = self.trial.phase;
        self.trial = trial_advance(&self.trial, &self.setup.durations, now, destroyed);
        if before == Phase::Ready && self.trial.phase >= Phase::Task {
            self.target = Some(spawn_target(
                &self.setup.target,
                self.setup.target_health,
                now,
                &mut self.rng,
            ));
        }
        if self.trial.phase >= Phase::Feedback {
            self.target = None;
        }
    }

    /// Runs one frame. `raw_events` are the inputs sampled at this frame's
    /// start, i.e. everything that arrived during the previous frame.
    pub fn step_frame(&mut self, raw_events: &[InputEvent]) -> FrameRecord {
        let index = self.clock.frame_index();
        let dt = self.clock.frame_period();
        let now = self.clock.sim_time();

        for e in raw_events {
            self.queue.push(*e, index);
        }
        let events = self.queue.drain_ready(index);

        for e in &events {
            match e.kind {
                InputKind::MouseDelta { dx, dy } => {
                    self.camera = apply_mouse(&self.camera, dx, dy, self.setup.sensitivity);
                }
                InputKind::ButtonDown => self.weapon.press(),
                InputKind::ButtonUp => self.weapon.release(),
            }
        }

        let (mut shots, mut hits, mut dry_fire) = (0, 0, false);
        match (&mut self.target, self.trial.phase) {
            (Some(target), Phase::Task) => {
                let (res, weapon) = weapon_fire_events(&self.weapon, &self.setup.weapon, dt, now);
                self.weapon = weapon;
                dry_fire = res.dry_fire;
                let center = target_world_position(target, self.camera.position);
                let on_target = ray_sphere_hit(
                    self.camera.position,
                    self.camera.direction(),
                    center,
                    target.visual_radius,
                )
                .map(Hit::is_hit)
                .unwrap_or(false);
                let fire: Vec<(DamageMode, f64)> = res
                    .shots
                    .iter()
                    .map(|_| (DamageMode::Discrete, 0.0))
                    .chain(res.beam.map(|d| (DamageMode::Continuous, d)))
                    .collect();
                for (mode, duration) in fire {
                    shots += 1;
                    if on_target && !target.is_destroyed() {
                        hits += 1;
                        *target = apply_damage(target, &self.setup.weapon, mode, duration);
                    }
                }
                if !target.is_destroyed() {
                    *target = update_target(target, &self.setup.target, dt, now, &mut self.rng);
                }
            }
            _ => {
                // shots outside the task phase are ignored
                self.weapon.press_pending = false;
            }
        }
        self.trial.shots_fired += shots;
        self.trial.shots_hit += hits;

        let visible = self.target.as_ref().filter(|t| !t.is_destroyed()).cloned();
        let record = FrameRecord {
            frame_index: index,
            sim_time: now,
            photon_time: self.clock.photon_time(index),
            phase: self.trial.phase,
            yaw: self.camera.yaw,
            pitch: self.camera.pitch,
            target_azimuth: visible.as_ref().map(|t| t.azimuth),
            target_elevation: visible.as_ref().map(|t| t.elevation),
            target_offset: visible.as_ref().map(|t| t.jump_offset),
            target_health: self.target.as_ref().map(|t| t.health),
            events,
            shots,
            hits,
            dry_fire,
        };

        if let Some(photon_time) = record.photon_time {
            let (dir, radius) = match &visible {
                Some(t) => {
                    let rel = target_world_position(t, self.camera.position) - self.camera.position;
                    let d = rel.norm();
                    (
                        Some(rel * (1.0 / d)),
                        Some((t.visual_radius / d).min(1.0).asin().to_degrees()),
                    )
                }
                None => (None, None),
            };
            self.displayed.push(DisplayedFrame {
                frame_index: index,
                photon_time,
                camera: self.camera,
                target_direction: dir,
                target_angular_radius: radius,
            });
        }

        self.clock.tick();
        self.advance_phase(self.clock.sim_time());
        record
    }
}
