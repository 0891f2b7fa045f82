use super::SimError;

/// Snap tolerance, in refresh periods, when a frame completion lands on a
/// refresh boundary.
const BOUNDARY_EPS: f64 = 1e-6;

/// Simulated frame clock. `sim_time` is always `frame_index * frame_period`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameClock {
    frame_period: f64,
    refresh_period: f64,
    frame_index: u64,
}

impl FrameClock {
    pub fn new(frame_rate: f64, refresh_rate: f64) -> Result<Self, SimError> {
        if !(frame_rate > 0.0 && frame_rate.is_finite()) {
            return Err(SimError::NonPositive("frameRate"));
        }
        if !(refresh_rate > 0.0 && refresh_rate.is_finite()) {
            return Err(SimError::NonPositive("refreshRate"));
        }
        Ok(FrameClock {
            frame_period: 1.0 / frame_rate,
            refresh_period: 1.0 / refresh_rate,
            frame_index: 0,
        })
    }

    pub fn frame_period(&self) -> f64 {
        self.frame_period
    }

    pub fn refresh_period(&self) -> f64 {
        self.refresh_period
    }

    pub fn frame_index(&self) -> u64 {
        self.frame_index
    }

    pub fn sim_time(&self) -> f64 {
        self.frame_start(self.frame_index)
    }

    pub fn frame_start(&self, index: u64) -> f64 {
        index as f64 * self.frame_period
    }

    pub fn tick(&mut self) {
        self.frame_index += 1;
    }

    /// First refresh boundary at or after `t`.
    pub fn next_refresh_boundary(&self, t: f64) -> f64 {
        next_boundary(t, self.refresh_period)
    }

    /// Time at which frame `index` becomes visible at the vertical centre of
    /// the display, or `None` when a newer frame replaces it before the next
    /// refresh (frame rate above refresh rate).
    pub fn photon_time(&self, index: u64) -> Option<f64> {
        let done = self.frame_start(index + 1);
        let boundary = self.next_refresh_boundary(done);
        let next_done = self.frame_start(index + 2);
        let superseded = next_done <= boundary + BOUNDARY_EPS * self.refresh_period;
        (!superseded).then_some(boundary + self.refresh_period / 2.0)
    }
}

pub(crate) fn next_boundary(t: f64, period: f64) -> f64 {
    let x = t / period;
    let nearest = x.round();
    let k = if (x - nearest).abs() < BOUNDARY_EPS {
        nearest
    } else {
        x.ceil()
    };
    k * period
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_rates_present_every_frame() {
        let c = FrameClock::new(60.0, 60.0).unwrap();
        for k in 0..200 {
            let p = c.photon_time(k).unwrap();
            let expected = (k + 1) as f64 / 60.0 + 0.5 / 60.0;
            assert!((p - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn double_rate_shows_every_second_frame() {
        let c = FrameClock::new(120.0, 60.0).unwrap();
        let shown: Vec<bool> = (0..20).map(|k| c.photon_time(k).is_some()).collect();
        for (k, s) in shown.iter().enumerate() {
            assert_eq!(*s, k % 2 == 1, "frame {k}");
        }
    }

    #[test]
    fn half_rate_waits_for_boundary() {
        let c = FrameClock::new(30.0, 60.0).unwrap();
        // frame 0 completes at 1/30 s, itself a refresh boundary
        let p = c.photon_time(0).unwrap();
        assert!((p - (1.0 / 30.0 + 0.5 / 60.0)).abs() < 1e-12);
    }

    #[test]
    fn sim_time_tracks_index() {
        let mut c = FrameClock::new(144.0, 60.0).unwrap();
        for _ in 0..1000 {
            c.tick();
        }
        assert_eq!(c.frame_index(), 1000);
        assert!((c.sim_time() - 1000.0 * c.frame_period()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_rates() {
        assert!(FrameClock::new(0.0, 60.0).is_err());
        assert!(FrameClock::new(60.0, f64::NAN).is_err());
    }
}
