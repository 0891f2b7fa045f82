use super::camera::wrap_degrees;
use super::Vec3;
use crate::experiment::{Range, TargetMotionSpec};
use rand::Rng;

/// Kinematic state of the target on a sphere around the player.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct TargetState {
    /// Degrees, `[0, 360)`.
    pub azimuth: f64,
    /// Degrees.
    pub elevation: f64,
    pub distance: f64,
    pub visual_radius: f64,
    /// Degrees per second along the current great circle.
    pub angular_speed: f64,
    /// Direction of travel in the tangent plane: 0 = increasing azimuth,
    /// 90 = increasing elevation.
    pub heading_angle: f64,
    /// Absolute sim time of the next speed/direction redraw.
    pub next_motion_change: f64,
    pub jump_offset: f64,
    pub jump_velocity: f64,
    pub next_jump: f64,
    pub health: f64,
}

impl TargetState {
    pub fn is_grounded(&self) -> bool {
        self.jump_offset <= 0.0 && self.jump_velocity <= 0.0
    }

    pub fn is_destroyed(&self) -> bool {
        self.health <= 0.0
    }
}

fn draw<R: Rng + ?Sized>(r: Range, rng: &mut R) -> f64 {
    if r.min == r.max {
        r.min
    } else {
        r.min + (r.max - r.min) * rng.random::<f64>()
    }
}

fn draw_heading<R: Rng + ?Sized>(spec: &TargetMotionSpec, rng: &mut R) -> f64 {
    if spec.horizontal_lock {
        if rng.random::<bool>() {
            0.0
        } else {
            180.0
        }
    } else {
        360.0 * rng.random::<f64>()
    }
}

/// Creates a target at sim time `now` with every ranged field drawn uniformly.
pub fn spawn_target<R: Rng + ?Sized>(
    spec: &TargetMotionSpec,
    health: f64,
    now: f64,
    rng: &mut R,
) -> TargetState {
    let azimuth = wrap_degrees(draw(spec.spawn_azimuth, rng));
    let elevation = draw(spec.spawn_elevation, rng);
    let distance = draw(spec.distance, rng);
    let visual_radius = draw(spec.visual_radius, rng);
    let angular_speed = draw(spec.speed, rng);
    let heading_angle = draw_heading(spec, rng);
    let next_motion_change = now + draw(spec.motion_change_period, rng);
    let next_jump = now + draw(spec.jump_period, rng);
    TargetState {
        azimuth,
        elevation,
        distance,
        visual_radius,
        angular_speed,
        heading_angle,
        next_motion_change,
        jump_offset: 0.0,
        jump_velocity: 0.0,
        next_jump,
        health,
    }
}

/// Advances the target by `dt` seconds starting at sim time `now`.
///
/// Pending motion changes and jump launches due at `now` are applied before
/// moving. Unlocked motion follows a great circle; the heading is carried
/// along it so a constant heading traces the same circle.
pub fn update_target<R: Rng + ?Sized>(
    state: &TargetState,
    spec: &TargetMotionSpec,
    dt: f64,
    now: f64,
    rng: &mut R,
) -> TargetState {
    let mut s = state.clone();
    if now >= s.next_motion_change {
        s.angular_speed = draw(spec.speed, rng);
        s.heading_angle = draw_heading(spec, rng);
        s.next_motion_change = now + draw(spec.motion_change_period, rng);
    }

    let travel = s.angular_speed * dt;
    if travel != 0.0 {
        if spec.horizontal_lock {
            let sign = if s.heading_angle == 180.0 { -1.0 } else { 1.0 };
            let cos_el = s.elevation.to_radians().cos().max(1e-9);
            s.azimuth = wrap_degrees(s.azimuth + sign * travel / cos_el);
        } else {
            move_great_circle(&mut s, travel);
        }
    }

    if spec.jump_enabled {
        if s.is_grounded() && now >= s.next_jump {
            s.jump_velocity = draw(spec.jump_speed, rng);
            s.next_jump = now + draw(spec.jump_period, rng);
        }
        if !s.is_grounded() {
            // exact for constant gravity
            s.jump_offset += s.jump_velocity * dt - 0.5 * spec.gravity * dt * dt;
            s.jump_velocity -= spec.gravity * dt;
            if s.jump_offset <= 0.0 {
                s.jump_offset = 0.0;
                s.jump_velocity = 0.0;
            }
        }
    }
    s
}

fn tangent_basis(az: f64, el: f64) -> (Vec3, Vec3) {
    let (sa, ca) = az.to_radians().sin_cos();
    let (se, ce) = el.to_radians().sin_cos();
    (
        Vec3::new(-sa, ca, 0.0),
        Vec3::new(-se * ca, -se * sa, ce),
    )
}

fn move_great_circle(s: &mut TargetState, travel_deg: f64) {
    let p = Vec3::from_angles(s.azimuth, s.elevation);
    let (east, north) = tangent_basis(s.azimuth, s.elevation);
    let (sh, ch) = s.heading_angle.to_radians().sin_cos();
    let t = east * ch + north * sh;
    let (st, ct) = travel_deg.to_radians().sin_cos();
    let p2 = p * ct + t * st;
    let t2 = t * ct - p * st;
    let (az, el) = p2.to_angles();
    let (east2, north2) = tangent_basis(az, el);
    s.azimuth = wrap_degrees(az);
    s.elevation = el;
    s.heading_angle = wrap_degrees(t2.dot(north2).atan2(t2.dot(east2)).to_degrees());
}

/// World-space centre of the target for a player standing at `origin`.
pub fn target_world_position(state: &TargetState, origin: Vec3) -> Vec3 {
    origin
        + Vec3::from_angles(state.azimuth, state.elevation) * state.distance
        + Vec3::new(0.0, 0.0, state.jump_offset)
}
