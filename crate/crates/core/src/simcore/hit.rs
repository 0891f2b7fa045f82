use super::{SimError, Vec3};

const UNIT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Hit {
    /// Nearest intersection parameter `t >= 0` along the ray.
    Hit(f64),
    Miss,
}

impl Hit {
    pub fn is_hit(self) -> bool {
        matches!(self, Hit::Hit(_))
    }
}

/// Ray/sphere test. Tangent rays count as hits; a ray starting inside the
/// sphere hits at `t = 0`.
pub fn ray_sphere_hit(
    origin: Vec3,
    direction: Vec3,
    center: Vec3,
    radius: f64,
) -> Result<Hit, SimError> {
    let len = direction.norm();
    if (len - 1.0).abs() > UNIT_TOLERANCE {
        return Err(SimError::NonUnitDirection(len));
    }
    if radius.is_nan() || radius <= 0.0 {
        return Err(SimError::NonPositive("radius"));
    }
    let oc = center - origin;
    let b = direction.dot(oc);
    let c = oc.dot(oc) - radius * radius;
    let disc = b * b - c;
    // tolerate rounding on exactly tangent rays
    if disc < -1e-12 * radius * radius {
        return Ok(Hit::Miss);
    }
    let root = disc.max(0.0).sqrt();
    let (near, far) = (b - root, b + root);
    Ok(if far < 0.0 {
        Hit::Miss
    } else {
        Hit::Hit(near.max(0.0))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);

    #[test]
    fn basic_cases() {
        let o = Vec3::ZERO;
        assert_eq!(ray_sphere_hit(o, X, Vec3::new(10.0, 0.0, 0.0), 1.0), Ok(Hit::Hit(9.0)));
        assert_eq!(ray_sphere_hit(o, X, Vec3::new(-10.0, 0.0, 0.0), 1.0), Ok(Hit::Miss));
        assert_eq!(ray_sphere_hit(o, X, Vec3::new(5.0, 1.0, 0.0), 1.0), Ok(Hit::Hit(5.0)));
        assert_eq!(ray_sphere_hit(o, X, Vec3::new(5.0, 1.0 + 1e-6, 0.0), 1.0), Ok(Hit::Miss));
        assert_eq!(ray_sphere_hit(o, X, Vec3::new(0.5, 0.0, 0.0), 1.0), Ok(Hit::Hit(0.0)));
        assert!(ray_sphere_hit(o, Vec3::new(2.0, 0.0, 0.0), X, 1.0).is_err());
    }

    /// Distance from `center` to the ray, found by dense sampling of `t`.
    fn sampled_clearance(origin: Vec3, dir: Vec3, center: Vec3, t_max: f64) -> f64 {
        let n = 20_000;
        (0..=n)
            .map(|i| {
                let t = t_max * i as f64 / n as f64;
                (origin + dir * t - center).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn agrees_with_sampling_oracle() {
        let mut rng = crate::seed::rng(2024);
        let mut checked = 0;
        let mut hits = 0;
        while checked < 1000 {
            let v = |rng: &mut crate::seed::SimRng, s: f64| {
                Vec3::new(
                    rng.random_range(-s..s),
                    rng.random_range(-s..s),
                    rng.random_range(-s..s),
                )
            };
            let origin = v(&mut rng, 5.0);
            let center = v(&mut rng, 5.0);
            let aim = (center - origin) + v(&mut rng, 2.0);
            let dir = aim.normalized();
            let radius = rng.random_range(0.1..2.0);
            let t_max = (center - origin).norm() + radius + 1.0;
            let clearance = sampled_clearance(origin, dir, center, t_max);
            // sampling step is t_max / 20000; skip cases too close to call
            if (clearance - radius).abs() < 1e-3 {
                continue;
            }
            let expected = clearance < radius;
            let got = ray_sphere_hit(origin, dir, center, radius).unwrap().is_hit();
            assert_eq!(got, expected, "o={origin:?} c={center:?} r={radius}");
            hits += usize::from(got);
            checked += 1;
        }
        assert!(hits > 100 && hits < 900, "{hits}");
    }
}
