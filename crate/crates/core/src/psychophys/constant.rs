use super::PsychophysError;
use crate::seed;
use rand::seq::SliceRandom;

#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleEntry {
    pub condition_id: String,
    pub level: f64,
}

/// Every `(condition, level)` pair repeated `per_level_count` times, in a
/// seeded random order.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantStimuliSchedule {
    pub entries: Vec<ScheduleEntry>,
    pub per_level_count: u32,
}

pub fn make_constant_schedule(
    levels: &[(String, f64)],
    reps: u32,
    seed: u64,
) -> Result<ConstantStimuliSchedule, PsychophysError> {
    if reps < 1 {
        return Err(PsychophysError::NoRepetitions);
    }
    if levels.is_empty() {
        return Err(PsychophysError::NoLevels);
    }
    let mut entries: Vec<ScheduleEntry> = levels
        .iter()
        .flat_map(|(id, level)| {
            std::iter::repeat_n(
                ScheduleEntry {
                    condition_id: id.clone(),
                    level: *level,
                },
                reps as usize,
            )
        })
        .collect();
    entries.shuffle(&mut seed::rng(seed));
    Ok(ConstantStimuliSchedule {
        entries,
        per_level_count: reps,
    })
}

/// Expands `(targetMotionId, count)` sets into a seeded random trial order.
pub fn order_trials(trial_sets: &[(String, u32)], seed: u64) -> Vec<String> {
    let mut ids: Vec<String> = trial_sets
        .iter()
        .flat_map(|(id, count)| std::iter::repeat_n(id.clone(), *count as usize))
        .collect();
    ids.shuffle(&mut seed::rng(seed));
    ids
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(pairs: &[(&str, f64)]) -> Vec<(String, f64)> {
        pairs.iter().map(|(s, l)| ((*s).to_owned(), *l)).collect()
    }

    #[test]
    fn single_level() {
        let s = make_constant_schedule(&lv(&[("A", 1.0)]), 3, 5).unwrap();
        assert_eq!(s.entries.len(), 3);
        assert!(s.entries.iter().all(|e| e.condition_id == "A" && e.level == 1.0));
    }

    #[test]
    fn each_pair_twice() {
        let s = make_constant_schedule(&lv(&[("A", 1.0), ("A", 2.0)]), 2, 11).unwrap();
        assert_eq!(s.entries.iter().filter(|e| e.level == 1.0).count(), 2);
        assert_eq!(s.entries.iter().filter(|e| e.level == 2.0).count(), 2);
    }

    #[test]
    fn errors() {
        assert_eq!(
            make_constant_schedule(&lv(&[("A", 1.0)]), 0, 0),
            Err(PsychophysError::NoRepetitions)
        );
        assert_eq!(make_constant_schedule(&[], 1, 0), Err(PsychophysError::NoLevels));
    }

    #[test]
    fn positions_are_uniform_across_seeds() {
        // 4 entries (2 pairs x 2 reps): each pair should sit in each slot with
        // probability 2/4 over many seeds.
        let levels = lv(&[("A", 1.0), ("B", 2.0)]);
        let draws = 1000;
        let mut a_at = [0usize; 4];
        for seed in 0..draws {
            let s = make_constant_schedule(&levels, 2, seed).unwrap();
            for (pos, e) in s.entries.iter().enumerate() {
                if e.condition_id == "A" {
                    a_at[pos] += 1;
                }
            }
        }
        for count in a_at {
            let freq = count as f64 / draws as f64;
            assert!((freq - 0.5).abs() <= 0.05, "{a_at:?}");
        }
    }

    #[test]
    fn trial_order() {
        assert_eq!(order_trials(&[("x".into(), 3)], 1), ["x", "x", "x"]);
        let sets = [("A".to_owned(), 2), ("B".to_owned(), 1)];
        let o = order_trials(&sets, 4);
        assert_eq!(o.iter().filter(|s| *s == "A").count(), 2);
        assert_eq!(o.iter().filter(|s| *s == "B").count(), 1);
        assert_eq!(order_trials(&sets, 4), o);
    }
}
