use super::TargetState;
use crate::experiment::{Ammo, WeaponSpec};

const TIME_EPS: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct WeaponState {
    pub ammo_remaining: Ammo,
    pub last_fire_time: Option<f64>,
    pub trigger_held: bool,
    /// A button-down edge not yet consumed by fire resolution.
    pub press_pending: bool,
    pub dry_fires: u32,
}

impl WeaponState {
    pub fn new(spec: &WeaponSpec) -> Self {
        WeaponState {
            ammo_remaining: spec.ammo_per_trial,
            last_fire_time: None,
            trigger_held: false,
            press_pending: false,
            dry_fires: 0,
        }
    }

    pub fn press(&mut self) {
        if !self.trigger_held {
            self.press_pending = true;
        }
        self.trigger_held = true;
    }

    pub fn release(&mut self) {
        self.trigger_held = false;
    }

    fn has_ammo(&self) -> bool {
        match self.ammo_remaining {
            Ammo::Unlimited => true,
            Ammo::Limited(n) => n > 0,
        }
    }

    fn spend(&mut self) {
        if let Ammo::Limited(n) = &mut self.ammo_remaining {
            *n -= 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DamageMode {
    /// One shot worth `damagePerSecond * firePeriod`.
    Discrete,
    /// Sustained beam over the frame.
    Continuous,
}

/// What the weapon did during one frame.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FireResolution {
    /// Times of discrete shots within the frame.
    pub shots: Vec<f64>,
    /// Seconds of continuous fire in this frame, for beam weapons.
    pub beam: Option<f64>,
    /// The player tried to fire with no ammo left.
    pub dry_fire: bool,
}

impl FireResolution {
    pub fn fired(&self) -> bool {
        !self.shots.is_empty() || self.beam.is_some()
    }
}

/// Resolves firing for the frame starting at `now`.
///
/// Single-shot weapons fire once per button-down edge once the fire period
/// has elapsed. Auto-fire weapons fire on every fire-period multiple while the
/// trigger is held; when the period is shorter than a frame they become a
/// continuous beam spending one unit of ammo per frame.
pub fn weapon_fire_events(
    weapon: &WeaponState,
    spec: &WeaponSpec,
    frame_period: f64,
    now: f64,
) -> (FireResolution, WeaponState) {
    let mut w = weapon.clone();
    let mut out = FireResolution::default();
    let wants_fire = w.trigger_held || w.press_pending;
    let cooled = |w: &WeaponState, t: f64| match w.last_fire_time {
        None => true,
        Some(last) => t - last >= spec.fire_period - TIME_EPS,
    };

    if spec.auto_fire && spec.fire_period < frame_period {
        if wants_fire {
            if w.has_ammo() {
                w.spend();
                w.last_fire_time = Some(now);
                out.beam = Some(frame_period);
            } else {
                out.dry_fire = true;
            }
        }
    } else if spec.auto_fire {
        if wants_fire {
            let frame_end = now + frame_period;
            let mut t = match w.last_fire_time {
                Some(last) if !cooled(&w, now) => last + spec.fire_period,
                _ => now,
            };
            while t < frame_end - TIME_EPS {
                if !w.has_ammo() {
                    out.dry_fire = true;
                    break;
                }
                w.spend();
                w.last_fire_time = Some(t);
                out.shots.push(t);
                t += spec.fire_period;
            }
        }
    } else if w.press_pending {
        if !w.has_ammo() {
            out.dry_fire = true;
        } else if cooled(&w, now) {
            w.spend();
            w.last_fire_time = Some(now);
            out.shots.push(now);
        }
    }
    w.press_pending = false;
    if out.dry_fire {
        w.dry_fires += 1;
    }
    (out, w)
}

/// Applies one confirmed hit; health never drops below zero.
pub fn apply_damage(target: &TargetState, spec: &WeaponSpec, mode: DamageMode, dt: f64) -> TargetState {
    let amount = match mode {
        DamageMode::Discrete => spec.damage_per_second * spec.fire_period,
        DamageMode::Continuous => spec.damage_per_second * dt,
    };
    let mut t = target.clone();
    t.health = (t.health - amount).max(0.0);
    t
}
