use super::{AnalysisError, TrialTable};
use serde::Serialize;

/// Keeps only successful trials, in their original order.
pub fn filter_failures(table: &TrialTable) -> TrialTable {
    TrialTable::from_filtered(table.rows().iter().filter(|r| r.is_success()).cloned().collect())
}

/// Scores consecutive groups of `group_size` trials (the last may be short).
/// Each successful trial earns the time it left on the clock; a group's
/// score is that total rounded to an integer.
pub fn group_scores(table: &TrialTable, group_size: usize, task_duration: f64) -> Result<Vec<i64>, AnalysisError> {
    if group_size == 0 {
        return Err(AnalysisError::GroupSize);
    }
    Ok(table
        .rows()
        .chunks(group_size)
        .map(|g| {
            let total: f64 = g
                .iter()
                .filter_map(|r| r.completion_time_sec)
                .map(|t| (task_duration - t).max(0.0))
                .sum();
            total.round() as i64
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CompletionStats {
    pub mean: f64,
    /// Sample standard deviation over the square root of `n`.
    pub standard_error: f64,
    pub n: usize,
}

pub fn summarize_times(times: &[f64]) -> Result<CompletionStats, AnalysisError> {
    let n = times.len();
    if n < 2 {
        return Err(AnalysisError::InsufficientData { needed: 2, have: n });
    }
    let (mean, sd) = mean_sd(times);
    Ok(CompletionStats {
        mean,
        standard_error: sd / (n as f64).sqrt(),
        n,
    })
}

/// Mean and standard error of completion time over successful trials.
pub fn completion_stats(table: &TrialTable) -> Result<CompletionStats, AnalysisError> {
    summarize_times(&table.completion_times())
}

/// Stats for the first and second halves of the successful trials. With an
/// odd count the second half gets the extra trial.
pub fn split_halves(table: &TrialTable) -> Result<(CompletionStats, CompletionStats), AnalysisError> {
    let times = table.completion_times();
    if times.len() < 4 {
        return Err(AnalysisError::InsufficientData {
            needed: 4,
            have: times.len(),
        });
    }
    let (first, second) = times.split_at(times.len() / 2);
    Ok((summarize_times(first)?, summarize_times(second)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HistogramBin {
    /// Bin covers `[start_ms, start_ms + 1)`.
    pub start_ms: i64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LatencySummary {
    pub n: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Sample standard deviation; zero for a single sample.
    pub stddev: f64,
    /// Contiguous 1 ms bins from the minimum's bin to the maximum's.
    pub histogram: Vec<HistogramBin>,
}

pub fn latency_summary(latencies_ms: &[f64]) -> Result<LatencySummary, AnalysisError> {
    if latencies_ms.is_empty() {
        return Err(AnalysisError::Empty);
    }
    if let Some(bad) = latencies_ms.iter().find(|v| !v.is_finite()) {
        return Err(AnalysisError::NonFinite(*bad));
    }
    let min = latencies_ms.iter().copied().fold(f64::INFINITY, f64::min);
    let max = latencies_ms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mean, stddev) = if latencies_ms.len() == 1 {
        (latencies_ms[0], 0.0)
    } else {
        mean_sd(latencies_ms)
    };
    let lo = min.floor() as i64;
    let hi = max.floor() as i64;
    let mut histogram: Vec<HistogramBin> = (lo..=hi).map(|start_ms| HistogramBin { start_ms, count: 0 }).collect();
    for v in latencies_ms {
        histogram[(v.floor() as i64 - lo) as usize].count += 1;
    }
    Ok(LatencySummary {
        n: latencies_ms.len(),
        mean,
        min,
        max,
        stddev,
        histogram,
    })
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{TrialOutcome, TrialRecord};
    use proptest::prelude::*;

    fn table(times: &[Option<f64>]) -> TrialTable {
        TrialTable::new(
            times
                .iter()
                .enumerate()
                .map(|(i, ct)| TrialRecord {
                    trial_index: i as u64,
                    session_id: "s".into(),
                    session_kind: "real".into(),
                    target_motion_id: format!("t{}", i % 3),
                    frame_rate: 60.0,
                    frame_delay: 2,
                    outcome: if ct.is_some() {
                        TrialOutcome::Success
                    } else {
                        TrialOutcome::Failure
                    },
                    completion_time_sec: *ct,
                    shots_fired: 0,
                    shots_hit: 0,
                    seed_stream: 0,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn filtering_drops_failures() {
        let mut v: Vec<Option<f64>> = (0..60).map(|i| Some(1.0 + i as f64 / 100.0)).collect();
        for i in [3, 17, 29, 44, 58] {
            v[i] = None;
        }
        let f = filter_failures(&table(&v));
        assert_eq!(f.len(), 55);
        assert!(f.rows().windows(2).all(|w| w[0].trial_index < w[1].trial_index));
        assert_eq!(filter_failures(&table(&[None, None])).len(), 0);
        let all = table(&[Some(1.0), Some(2.0)]);
        assert_eq!(filter_failures(&all), all);
    }

    #[test]
    fn scores_from_time_left() {
        assert_eq!(group_scores(&table(&[Some(1.5); 10]), 10, 6.0).unwrap(), vec![45]);
        assert_eq!(group_scores(&table(&[None; 10]), 10, 6.0).unwrap(), vec![0]);
        assert_eq!(group_scores(&table(&[Some(6.0); 10]), 10, 6.0).unwrap(), vec![0]);
        assert_eq!(group_scores(&table(&[Some(1.0); 25]), 10, 6.0).unwrap(), vec![50, 50, 25]);
        assert!(group_scores(&table(&[Some(1.0)]), 0, 6.0).is_err());
    }

    #[test]
    fn completion_stats_by_hand() {
        let s = completion_stats(&table(&[Some(1.0); 3])).unwrap();
        assert_eq!((s.mean, s.standard_error, s.n), (1.0, 0.0, 3));
        let s = completion_stats(&table(&[Some(1.0), None, Some(2.0)])).unwrap();
        assert_eq!(s.mean, 1.5);
        // s = 0.7071, SE = s / sqrt(2)
        assert!((s.standard_error - 0.5).abs() < 1e-15);
        assert_eq!(
            completion_stats(&table(&[Some(1.0), None])),
            Err(AnalysisError::InsufficientData { needed: 2, have: 1 })
        );
    }

    /// Spreadsheet-style recomputation: running sums, then the textbook
    /// computational formula for variance.
    fn spreadsheet(times: &[f64]) -> (f64, f64) {
        let (mut s, mut s2) = (0.0, 0.0);
        for t in times {
            s += t;
            s2 += t * t;
        }
        let n = times.len() as f64;
        let var = (s2 - s * s / n) / (n - 1.0);
        (s / n, (var / n).sqrt())
    }

    #[test]
    fn split_half_matches_recompute() {
        let mut rng = crate::seed::rng(5);
        use rand::Rng;
        let mut v: Vec<Option<f64>> = (0..60).map(|_| Some(rng.random_range(0.8..2.5))).collect();
        for i in [0, 11, 23, 47, 59] {
            v[i] = None;
        }
        let t = table(&v);
        let (a, b) = split_halves(&t).unwrap();
        assert_eq!((a.n, b.n), (27, 28));
        let times: Vec<f64> = v.iter().flatten().copied().collect();
        for (stats, part) in [(a, &times[..27]), (b, &times[27..])] {
            let (m, se) = spreadsheet(part);
            assert!((stats.mean - m).abs() < 1e-12);
            assert!((stats.standard_error - se).abs() < 1e-12);
        }
    }

    #[test]
    fn split_half_edges() {
        let (a, b) = split_halves(&table(&[Some(2.0); 4])).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.standard_error, 0.0);
        assert!(split_halves(&table(&[Some(1.0), Some(1.0), Some(1.0), None])).is_err());
    }

    #[test]
    fn latency_summary_cases() {
        let s = latency_summary(&[33.3; 2000]).unwrap();
        assert!((s.mean - 33.3).abs() < 1e-9);
        assert!(s.stddev < 1e-9);
        assert_eq!(s.histogram, vec![HistogramBin { start_ms: 33, count: 2000 }]);

        let s = latency_summary(&[10.0, 20.0]).unwrap();
        assert_eq!(s.mean, 15.0);
        assert!((s.stddev - 7.0711).abs() < 1e-4);
        assert_eq!(s.histogram.len(), 11);
        assert_eq!(s.histogram[0].count + s.histogram[10].count, 2);

        let s = latency_summary(&[12.5]).unwrap();
        assert_eq!((s.mean, s.stddev, s.n), (12.5, 0.0, 1));
        assert_eq!(latency_summary(&[]), Err(AnalysisError::Empty));
        assert!(latency_summary(&[f64::NAN]).is_err());
    }

    #[test]
    fn latency_model_summary() {
        let lat = crate::simcore::click_to_photon_model(60.0, 60.0, 0, 2000, 0).unwrap();
        let s = latency_summary(&lat).unwrap();
        assert!((s.mean - 100.0 / 3.0).abs() < 0.5);
        assert!(s.min >= 25.0 - 1e-9 && s.max <= 41.67);
        assert_eq!(s.histogram.iter().map(|b| b.count).sum::<usize>(), 2000);
    }

    #[test]
    fn standard_error_scales_with_root_n() {
        use rand_distr::{Distribution, Normal};
        let normal = Normal::new(1.5, 0.3).unwrap();
        let (mut small, mut large) = (0.0, 0.0);
        for seed in 0..100 {
            let mut rng = crate::seed::rng(seed);
            let draw = |n: usize, rng: &mut crate::seed::SimRng| -> Vec<f64> {
                (0..n).map(|_| normal.sample(rng)).collect()
            };
            small += summarize_times(&draw(100, &mut rng)).unwrap().standard_error;
            large += summarize_times(&draw(400, &mut rng)).unwrap().standard_error;
        }
        let ratio = small / large;
        assert!((ratio - 2.0).abs() < 0.1, "{ratio}");
    }

    proptest! {
        #[test]
        fn filter_is_idempotent(v in proptest::collection::vec(proptest::option::of(0.0..6.0f64), 0..80)) {
            let once = filter_failures(&table(&v));
            prop_assert_eq!(filter_failures(&once), once.clone());
        }

        #[test]
        fn scores_ignore_target_labels(
            v in proptest::collection::vec(proptest::option::of(0.0..6.0f64), 1..80),
            g in 1usize..15,
        ) {
            let t = table(&v);
            let relabeled = TrialTable::new(
                t.rows().iter().map(|r| TrialRecord { target_motion_id: "other".into(), ..r.clone() }).collect(),
            ).unwrap();
            prop_assert_eq!(group_scores(&t, g, 6.0).unwrap(), group_scores(&relabeled, g, 6.0).unwrap());
        }
    }
}
