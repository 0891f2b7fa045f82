use super::PsychophysError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Response {
    Correct,
    Incorrect,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Undecided,
    Up,
    Down,
}

/// Parameters of a transformed up-down staircase.
#[derive(Clone, Debug, PartialEq)]
pub struct StaircaseConfig {
    pub start_level: f64,
    pub step_size: f64,
    /// Consecutive incorrect responses that raise the level.
    pub n_up: u32,
    /// Consecutive correct responses that lower the level.
    pub n_down: u32,
    pub min_level: f64,
    pub max_level: f64,
    /// Reversals after which the run is complete.
    pub target_reversals: u32,
}

impl StaircaseConfig {
    /// 1-up/2-down, 9 reversals.
    pub fn new(start_level: f64, step_size: f64, min_level: f64, max_level: f64) -> Self {
        StaircaseConfig {
            start_level,
            step_size,
            n_up: 1,
            n_down: 2,
            min_level,
            max_level,
            target_reversals: 9,
        }
    }

    pub fn validate(&self) -> Result<(), PsychophysError> {
        let bad = |m: &str| Err(PsychophysError::InvalidStaircase(m.to_owned()));
        let finite = [self.start_level, self.step_size, self.min_level, self.max_level]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return bad("levels and step size must be finite");
        }
        if self.step_size <= 0.0 {
            return bad("stepSize must be > 0");
        }
        if self.n_up < 1 || self.n_down < 1 {
            return bad("nUp and nDown must be >= 1");
        }
        if self.min_level > self.max_level {
            return bad("minLevel exceeds maxLevel");
        }
        if !(self.min_level..=self.max_level).contains(&self.start_level) {
            return bad("startLevel lies outside [minLevel, maxLevel]");
        }
        if self.target_reversals < 2 {
            return bad("reversals must be >= 2");
        }
        Ok(())
    }
}

/// Running state of one staircase.
#[derive(Clone, Debug, PartialEq)]
pub struct StaircaseState {
    pub config: StaircaseConfig,
    pub current_level: f64,
    pub history: Vec<(f64, Response)>,
    /// Levels at which the run direction flipped.
    pub reversals: Vec<f64>,
    pub run_direction: Direction,
    correct_run: u32,
    incorrect_run: u32,
}

impl StaircaseState {
    pub fn new(config: StaircaseConfig) -> Result<Self, PsychophysError> {
        config.validate()?;
        Ok(StaircaseState {
            current_level: config.start_level,
            config,
            history: Vec::new(),
            reversals: Vec::new(),
            run_direction: Direction::Undecided,
            correct_run: 0,
            incorrect_run: 0,
        })
    }

    pub fn is_complete(&self) -> bool {
        self.reversals.len() >= self.config.target_reversals as usize
    }

    /// Applies one response and returns the next state.
    ///
    /// The counters that trigger a move reset whenever the level moves or the
    /// response flips. A move opposite to the current run direction records
    /// the pre-move level as a reversal; clamped moves still count as moves.
    pub fn step(&self, response: Response) -> Result<Self, PsychophysError> {
        if self.is_complete() {
            return Err(PsychophysError::StaircaseComplete);
        }
        let mut next = self.clone();
        next.history.push((self.current_level, response));
        let movement = match response {
            Response::Correct => {
                next.incorrect_run = 0;
                next.correct_run += 1;
                (next.correct_run >= self.config.n_down).then_some(Direction::Down)
            }
            Response::Incorrect => {
                next.correct_run = 0;
                next.incorrect_run += 1;
                (next.incorrect_run >= self.config.n_up).then_some(Direction::Up)
            }
        };
        if let Some(dir) = movement {
            next.correct_run = 0;
            next.incorrect_run = 0;
            if self.run_direction != Direction::Undecided && self.run_direction != dir {
                next.reversals.push(self.current_level);
            }
            next.run_direction = dir;
            let delta = match dir {
                Direction::Up => self.config.step_size,
                _ => -self.config.step_size,
            };
            next.current_level = (self.current_level + delta)
                .clamp(self.config.min_level, self.config.max_level);
        }
        Ok(next)
    }

    /// Mean reversal level, skipping the first two reversals when at least
    /// four are used.
    pub fn threshold(&self) -> Result<f64, PsychophysError> {
        let needed = self.config.target_reversals as usize;
        if self.reversals.len() < needed {
            return Err(PsychophysError::InsufficientReversals {
                needed,
                have: self.reversals.len(),
            });
        }
        let used = &self.reversals[self.reversals.len() - needed..];
        let used = if needed >= 4 { &used[2..] } else { used };
        Ok(used.iter().sum::<f64>() / used.len() as f64)
    }
}
