use super::{SimError, Vec3};

pub const PITCH_LIMIT: f64 = 89.0;
const CM_PER_INCH: f64 = 2.54;

/// Degrees of rotation per mouse count for a given distance-per-360° and DPI.
pub fn mouse_sensitivity(cm_per_360: f64, dpi: f64) -> Result<f64, SimError> {
    if !(cm_per_360 > 0.0 && cm_per_360.is_finite()) {
        return Err(SimError::NonPositive("cmPer360"));
    }
    if !(dpi > 0.0 && dpi.is_finite()) {
        return Err(SimError::NonPositive("dpi"));
    }
    Ok(360.0 / ((cm_per_360 / CM_PER_INCH) * dpi))
}

/// View orientation of a player standing at a fixed point.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct CameraState {
    /// Degrees in `[0, 360)`.
    pub yaw: f64,
    /// Degrees in `[-PITCH_LIMIT, PITCH_LIMIT]`.
    pub pitch: f64,
    pub position: Vec3,
}

impl Default for CameraState {
    fn default() -> Self {
        CameraState {
            yaw: 0.0,
            pitch: 0.0,
            position: Vec3::ZERO,
        }
    }
}

impl CameraState {
    pub fn direction(&self) -> Vec3 {
        Vec3::from_angles(self.yaw, self.pitch)
    }

    /// Rotates by the given angles in degrees, wrapping yaw and clamping pitch.
    pub fn rotated(&self, d_yaw: f64, d_pitch: f64) -> Self {
        CameraState {
            yaw: wrap_degrees(self.yaw + d_yaw),
            pitch: (self.pitch + d_pitch).clamp(-PITCH_LIMIT, PITCH_LIMIT),
            position: self.position,
        }
    }
}

pub(crate) fn wrap_degrees(a: f64) -> f64 {
    let w = a.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    if w >= 360.0 {
        0.0
    } else {
        w
    }
}

/// Signed difference `to - from` folded into `(-180, 180]`.
pub(crate) fn angle_diff(to: f64, from: f64) -> f64 {
    let d = (to - from).rem_euclid(360.0);
    if d > 180.0 {
        d - 360.0
    } else {
        d
    }
}

/// Moving the mouse right (`dx > 0`) raises yaw; moving it toward the
/// player (`dy > 0`) lowers pitch.
pub fn apply_mouse(camera: &CameraState, dx: i64, dy: i64, sensitivity: f64) -> CameraState {
    camera.rotated(dx as f64 * sensitivity, -(dy as f64) * sensitivity)
}
