use crate::{read_config, read_tree, to_json, write_atomic, write_file, Failure, EXIT_INVALID, EXIT_IO};
use fpsci_core::anyconf::{serialize_pretty, Table, Value};
use fpsci_core::analysis::{write_trials_csv, TrialTable};
use fpsci_core::experiment::{
    load_status, load_users, mark_completed, next_session, status_to_value, StatusFile, UserStatus,
};
use fpsci_core::runner::run_session;
use fpsci_core::simcore::FrameRecord;
use serde::Serialize;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

/// Seeds are stored as AnyLite numbers, so they must be exact in an f64.
const MAX_SEED: u64 = 1 << 53;

#[derive(clap::Args)]
pub struct Args {
    /// Experiment config (AnyLite).
    pub config: PathBuf,
    /// User id from the user table.
    #[arg(long)]
    pub user: String,
    /// Master seed (0 to 2^53); fixes trial order and every random draw.
    #[arg(long, value_parser = clap::value_parser!(u64).range(0..=MAX_SEED))]
    pub seed: u64,
    /// Output directory; created if missing.
    #[arg(long)]
    pub out: PathBuf,
    /// User table [default: users.any next to the config].
    #[arg(long)]
    pub users: Option<PathBuf>,
    /// Progress file [default: status.any in the output directory].
    #[arg(long)]
    pub status: Option<PathBuf>,
    /// Run this session instead of the user's next one.
    #[arg(long)]
    pub session: Option<String>,
    /// Allow re-running a completed session.
    #[arg(long)]
    pub force: bool,
    /// Also write one JSON object per simulated frame.
    #[arg(long)]
    pub frames_log: Option<PathBuf>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct FrameLine<'a> {
    trial_index: u64,
    #[serde(flatten)]
    frame: &'a FrameRecord,
}

fn invalid(path: &Path, diags: &[impl std::fmt::Display]) -> Failure {
    let lines: Vec<String> = diags.iter().map(|d| format!("{}: {d}", path.display())).collect();
    Failure::new(EXIT_INVALID, lines.join("\n"))
}

pub fn run(args: &Args) -> Result<(), Failure> {
    let config = read_config(&args.config)?;

    let users_path = args.users.clone().unwrap_or_else(|| {
        args.config
            .parent()
            .unwrap_or(Path::new("."))
            .join("users.any")
    });
    let users = load_users(&read_tree(&users_path)?).map_err(|d| invalid(&users_path, &d))?.value;
    let user = users
        .iter()
        .find(|u| u.user_id == args.user)
        .ok_or_else(|| Failure::new(EXIT_INVALID, format!("unknown user `{}` in {}", args.user, users_path.display())))?;

    fs::create_dir_all(&args.out).map_err(|e| Failure::io(&args.out, e))?;
    let status_path = args.status.clone().unwrap_or_else(|| args.out.join("status.any"));
    let mut status_file: StatusFile = if status_path.exists() {
        load_status(&read_tree(&status_path)?, Some(&config.sessions))
            .map_err(|d| invalid(&status_path, &d))?
            .value
    } else {
        StatusFile::new()
    };
    let status = status_file
        .get(&args.user)
        .cloned()
        .unwrap_or_else(|| UserStatus::new(args.user.as_str()));

    let session = match &args.session {
        Some(id) => {
            let s = config
                .session(id)
                .ok_or_else(|| Failure::new(EXIT_INVALID, format!("unknown session `{id}`")))?;
            if status.is_completed(id) && !args.force {
                return Err(Failure::new(
                    EXIT_INVALID,
                    format!("session `{id}` already completed by `{}`; pass --force to rerun", args.user),
                ));
            }
            s
        }
        None => next_session(&status, &config.sessions, args.seed)
            .map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?
            .ok_or_else(|| Failure::new(EXIT_INVALID, format!("user `{}` has no remaining sessions", args.user)))?,
    };

    let mut frames = match &args.frames_log {
        Some(p) => Some((p, BufWriter::new(File::create(p).map_err(|e| Failure::io(p, e))?))),
        None => None,
    };
    let mut frame_error = None;
    let outcome = run_session(&config, session, &user.user_id, user.sensitivity(), args.seed, |trial, frame| {
        if let Some((path, w)) = &mut frames {
            if frame_error.is_none() {
                let line = serde_json::to_string(&FrameLine {
                    trial_index: trial,
                    frame,
                })
                .expect("frames serialize");
                if let Err(e) = writeln!(w, "{line}") {
                    frame_error = Some(Failure::io(path, e));
                }
            }
        }
    })
    .map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    if let Some(e) = frame_error {
        return Err(e);
    }
    if let Some((path, mut w)) = frames {
        w.flush().map_err(|e| Failure::io(path, e))?;
    }

    let table = TrialTable::new(outcome.records).map_err(|e| Failure::new(EXIT_IO, e.to_string()))?;
    let mut csv = Vec::new();
    write_trials_csv(&table, &mut csv).map_err(|e| Failure::new(EXIT_IO, e.to_string()))?;
    write_file(&args.out.join("trials.csv"), &csv)?;
    if let Some(log) = &outcome.staircase {
        write_file(&args.out.join("staircase.json"), to_json(log).as_bytes())?;
    }

    let updated = mark_completed(&status, &session.id, &config.sessions)
        .map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    status_file.insert(args.user.clone(), updated);
    let mut text = serialize_pretty(&status_to_value(&status_file));
    text.push('\n');
    write_atomic(&status_path, text.as_bytes())?;

    let mut manifest = Table::new();
    manifest.insert("configPath".into(), args.config.display().to_string().into());
    manifest.insert("userId".into(), args.user.as_str().into());
    manifest.insert("masterSeed".into(), (args.seed as f64).into());
    manifest.insert("sessionId".into(), session.id.as_str().into());
    manifest.insert("outputDirectory".into(), args.out.display().to_string().into());
    manifest.insert(
        "timestamp".into(),
        chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true).into(),
    );
    let mut text = serialize_pretty(&Value::Table(manifest));
    text.push('\n');
    write_file(&args.out.join("manifest.any"), text.as_bytes())?;

    let successes = table.rows().iter().filter(|r| r.is_success()).count();
    println!(
        "{}: session `{}` for `{}`: {} trials, {} successes -> {}",
        args.config.display(),
        session.id,
        args.user,
        table.len(),
        successes,
        args.out.join("trials.csv").display()
    );
    Ok(())
}
