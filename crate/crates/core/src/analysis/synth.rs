use super::{TrialOutcome, TrialRecord, TrialTable};
use crate::seed;
use rand::seq::index;
use rand_distr::{Distribution, StandardNormal};

/// Synthetic trial log whose successful completion times shift between the
/// first and second half of the successes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlantedTrend {
    pub trials: usize,
    pub failures: usize,
    pub first_mean: f64,
    pub second_mean: f64,
    pub sigma: f64,
    pub task_duration: f64,
    /// Rescale each half's noise so its sample mean and standard deviation
    /// equal the planted values exactly, rather than in expectation.
    pub exact_moments: bool,
}

impl Default for PlantedTrend {
    fn default() -> Self {
        PlantedTrend {
            trials: 60,
            failures: 5,
            first_mean: 1.78,
            second_mean: 1.34,
            sigma: 0.2,
            task_duration: 6.0,
            exact_moments: true,
        }
    }
}

pub fn planted_trend(spec: &PlantedTrend, seed: u64) -> TrialTable {
    let mut rng = seed::rng(seed);
    let failures = spec.failures.min(spec.trials);
    let failed: std::collections::HashSet<usize> = index::sample(&mut rng, spec.trials, failures).into_iter().collect();
    let successes = spec.trials - failures;
    let split = successes / 2;

    let mut noise: Vec<f64> = (0..successes).map(|_| StandardNormal.sample(&mut rng)).collect();
    if spec.exact_moments {
        let (a, b) = noise.split_at_mut(split);
        standardize(a);
        standardize(b);
    }
    let mut times = noise.into_iter().enumerate().map(|(i, z)| {
        let mean = if i < split { spec.first_mean } else { spec.second_mean };
        (mean + spec.sigma * z).clamp(0.0, spec.task_duration)
    });

    let rows = (0..spec.trials)
        .map(|i| {
            let ct = if failed.contains(&i) { None } else { times.next() };
            TrialRecord {
                trial_index: i as u64,
                session_id: "synthetic".into(),
                session_kind: "real".into(),
                target_motion_id: "planted".into(),
                frame_rate: 60.0,
                frame_delay: 2,
                outcome: if ct.is_some() {
                    TrialOutcome::Success
                } else {
                    TrialOutcome::Failure
                },
                completion_time_sec: ct,
                shots_fired: 1,
                shots_hit: u32::from(ct.is_some()),
                seed_stream: seed,
            }
        })
        .collect();
    TrialTable::new(rows).expect("generated rows are well formed")
}

/// Shifts and scales to sample mean 0 and sample standard deviation 1.
fn standardize(xs: &mut [f64]) {
    if xs.len() < 2 {
        return;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    for x in xs.iter_mut() {
        *x = (*x - mean) / sd;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{filter_failures, split_halves};

    #[test]
    fn shape_of_default_dataset() {
        let t = planted_trend(&PlantedTrend::default(), 3);
        assert_eq!(t.len(), 60);
        assert_eq!(filter_failures(&t).len(), 55);
        let (a, b) = split_halves(&t).unwrap();
        assert_eq!((a.n, b.n), (27, 28));
        assert!((a.mean - 1.78).abs() < 1e-12);
        assert!((b.mean - 1.34).abs() < 1e-12);
        assert!((a.standard_error - 0.2 / 27f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn iid_noise_recovers_planted_means() {
        let spec = PlantedTrend {
            first_mean: 2.0,
            second_mean: 1.0,
            sigma: 0.1,
            exact_moments: false,
            ..PlantedTrend::default()
        };
        // each half mean has standard error ~0.019, so 0.05 is ~2.6 SE
        let mut within = 0;
        for seed in 0..100 {
            let (a, b) = split_halves(&planted_trend(&spec, seed)).unwrap();
            within += usize::from((a.mean - 2.0).abs() < 0.05);
            within += usize::from((b.mean - 1.0).abs() < 0.05);
        }
        assert!(within >= 190, "{within}/200");
    }

    #[test]
    fn deterministic() {
        let s = PlantedTrend::default();
        assert_eq!(planted_trend(&s, 9), planted_trend(&s, 9));
        assert_ne!(planted_trend(&s, 9), planted_trend(&s, 10));
    }
}
