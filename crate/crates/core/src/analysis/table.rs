use super::AnalysisError;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

/// Column order of `trials.csv`.
pub const CSV_COLUMNS: [&str; 11] = [
    "trialIndex",
    "sessionId",
    "sessionKind",
    "targetMotionId",
    "frameRate",
    "frameDelay",
    "outcome",
    "completionTimeSec",
    "shotsFired",
    "shotsHit",
    "seedStream",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialOutcome {
    Success,
    Failure,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TrialRecord {
    pub trial_index: u64,
    pub session_id: String,
    pub session_kind: String,
    pub target_motion_id: String,
    pub frame_rate: f64,
    pub frame_delay: u32,
    pub outcome: TrialOutcome,
    pub completion_time_sec: Option<f64>,
    pub shots_fired: u32,
    pub shots_hit: u32,
    pub seed_stream: u64,
}

impl TrialRecord {
    pub fn is_success(&self) -> bool {
        self.outcome == TrialOutcome::Success
    }
}

/// Trial rows with strictly increasing indices; a completion time is present
/// exactly on successful rows.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrialTable {
    rows: Vec<TrialRecord>,
}

impl TrialTable {
    pub fn new(rows: Vec<TrialRecord>) -> Result<Self, AnalysisError> {
        for (i, r) in rows.iter().enumerate() {
            let bad = |message: &str| AnalysisError::BadRow {
                row: i + 1,
                message: message.to_string(),
            };
            if i > 0 && r.trial_index <= rows[i - 1].trial_index {
                return Err(bad("trialIndex must be strictly increasing"));
            }
            match (r.outcome, r.completion_time_sec) {
                (TrialOutcome::Success, None) => return Err(bad("success without completionTimeSec")),
                (TrialOutcome::Failure, Some(_)) => return Err(bad("failure with completionTimeSec")),
                (_, Some(t)) if !(t.is_finite() && t >= 0.0) => {
                    return Err(bad("completionTimeSec must be finite and >= 0"))
                }
                _ => {}
            }
        }
        Ok(TrialTable { rows })
    }

    pub fn rows(&self) -> &[TrialRecord] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Completion times of successful rows, in order.
    pub fn completion_times(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.completion_time_sec).collect()
    }

    pub(crate) fn from_filtered(rows: Vec<TrialRecord>) -> Self {
        TrialTable { rows }
    }
}

pub fn write_trials_csv<W: Write>(table: &TrialTable, out: W) -> Result<(), AnalysisError> {
    let mut w = csv::Writer::from_writer(out);
    if table.is_empty() {
        w.write_record(CSV_COLUMNS).map_err(csv_error)?;
    }
    for r in table.rows() {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush().map_err(|e| AnalysisError::Io(e.to_string()))
}

pub fn read_trials_csv<R: Read>(input: R) -> Result<TrialTable, AnalysisError> {
    let mut rd = csv::Reader::from_reader(input);
    let headers = rd.headers().map_err(csv_error)?.clone();
    if headers.is_empty() {
        return Err(AnalysisError::Csv {
            line: 1,
            message: "empty file".into(),
        });
    }
    if headers.iter().ne(CSV_COLUMNS) {
        return Err(AnalysisError::Csv {
            line: 1,
            message: format!("expected header {}", CSV_COLUMNS.join(",")),
        });
    }
    let rows = rd
        .deserialize::<TrialRecord>()
        .collect::<Result<Vec<_>, _>>()
        .map_err(csv_error)?;
    if rows.is_empty() {
        return Err(AnalysisError::Csv {
            line: 2,
            message: "no trial rows".into(),
        });
    }
    TrialTable::new(rows)
}

fn csv_error(e: csv::Error) -> AnalysisError {
    let line = e.position().map_or(0, |p| p.line());
    let message = match e.kind() {
        csv::ErrorKind::Deserialize { err, .. } => match err.field() {
            Some(f) => format!(
                "column {}: {}",
                CSV_COLUMNS.get(f as usize).copied().unwrap_or("?"),
                err.kind()
            ),
            None => err.kind().to_string(),
        },
        _ => e.to_string(),
    };
    AnalysisError::Csv { line, message }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(i: u64, ct: Option<f64>) -> TrialRecord {
        TrialRecord {
            trial_index: i,
            session_id: "s".into(),
            session_kind: "real".into(),
            target_motion_id: "t".into(),
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
            seed_stream: 42 + i,
        }
    }

    #[test]
    fn csv_round_trip() {
        let t = TrialTable::new(vec![row(0, Some(1.25)), row(1, None), row(2, Some(0.1 + 0.2))]).unwrap();
        let mut buf = Vec::new();
        write_trials_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        assert_eq!(lines.next().unwrap(), "0,s,real,t,60.0,2,success,1.25,1,1,42");
        assert_eq!(lines.next().unwrap(), "1,s,real,t,60.0,2,failure,,1,0,43");
        assert_eq!(read_trials_csv(&buf[..]).unwrap(), t);
    }

    #[test]
    fn malformed_rows_are_positioned() {
        let head = CSV_COLUMNS.join(",");
        let text = format!("{head}\n0,s,real,t,60,2,success,1.0,1,1,1\n1,s,real,t,60,2,maybe,,1,1,1\n");
        match read_trials_csv(text.as_bytes()) {
            Err(AnalysisError::Csv { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("maybe"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        assert!(read_trials_csv("".as_bytes()).is_err());
        assert!(read_trials_csv(format!("{head}\n").as_bytes()).is_err());
        assert!(read_trials_csv("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn table_invariants() {
        assert!(TrialTable::new(vec![row(1, None), row(1, None)]).is_err());
        let mut r = row(0, None);
        r.outcome = TrialOutcome::Success;
        assert!(TrialTable::new(vec![r]).is_err());
        let mut r = row(0, Some(1.0));
        r.outcome = TrialOutcome::Failure;
        assert!(TrialTable::new(vec![r]).is_err());
    }
}
