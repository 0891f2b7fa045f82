use super::reader::{join, Reader};
use super::{ConfigDiagnostic, Loaded, ProgressError, SessionSpec};
use crate::anyconf::{Table, Value};
use crate::seed;
use indexmap::IndexMap;
use rand::seq::SliceRandom;

#[derive(Clone, Debug, PartialEq)]
pub struct UserRecord {
    pub user_id: String,
    pub cm_per_360: f64,
    pub mouse_dpi: f64,
}

impl UserRecord {
    /// Degrees of view rotation per mouse count.
    pub fn sensitivity(&self) -> f64 {
        crate::simcore::mouse_sensitivity(self.cm_per_360, self.mouse_dpi)
            .expect("validated user record")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UserStatus {
    pub user_id: String,
    pub completed_sessions: Vec<String>,
    pub session_order: Option<Vec<String>>,
}

impl UserStatus {
    pub fn new(user_id: impl Into<String>) -> Self {
        UserStatus {
            user_id: user_id.into(),
            ..Default::default()
        }
    }

    pub fn is_completed(&self, session_id: &str) -> bool {
        self.completed_sessions.iter().any(|s| s == session_id)
    }
}

/// Contents of `status.any`, keyed by user id.
pub type StatusFile = IndexMap<String, UserStatus>;

/// Reads `users.any`: a list of `{userId, cmPer360, mouseDpi}` tables.
pub fn load_users(tree: &Value) -> Result<Loaded<Vec<UserRecord>>, Vec<ConfigDiagnostic>> {
    let mut r = Reader::default();
    let mut users: Vec<UserRecord> = Vec::new();
    if let Some(items) = r.list(tree, "") {
        for (i, item) in items.iter().enumerate() {
            let path = format!("[{i}]");
            let Some(t) = r.table(item, &path) else { continue };
            r.check_keys(t, &path, &["userId", "cmPer360", "mouseDpi"]);
            let id = r
                .required(t, &path, "userId")
                .and_then(|v| r.text(v, &join(&path, "userId")));
            let positive = |r: &mut Reader, key: &str| {
                let p = join(&path, key);
                let v = r.required(t, &path, key).and_then(|v| r.number(v, &p))?;
                r.bound(v, &p, 0.0, true);
                Some(v)
            };
            let cm = positive(&mut r, "cmPer360");
            let dpi = positive(&mut r, "mouseDpi");
            if let (Some(user_id), Some(cm_per_360), Some(mouse_dpi)) = (id, cm, dpi) {
                if users.iter().any(|u| u.user_id == user_id) {
                    r.error(join(&path, "userId"), format!("duplicate user `{user_id}`"));
                }
                users.push(UserRecord {
                    user_id,
                    cm_per_360,
                    mouse_dpi,
                });
            }
        }
    }
    if r.has_errors() {
        Err(r.diags)
    } else {
        Ok(Loaded {
            value: users,
            warnings: r.diags,
        })
    }
}

pub fn users_to_value(users: &[UserRecord]) -> Value {
    Value::List(
        users
            .iter()
            .map(|u| {
                let mut t = Table::new();
                t.insert("userId".into(), u.user_id.as_str().into());
                t.insert("cmPer360".into(), u.cm_per_360.into());
                t.insert("mouseDpi".into(), u.mouse_dpi.into());
                Value::Table(t)
            })
            .collect(),
    )
}

/// Reads `status.any`. When `sessions` is given, ids are checked against it.
pub fn load_status(
    tree: &Value,
    sessions: Option<&[SessionSpec]>,
) -> Result<Loaded<StatusFile>, Vec<ConfigDiagnostic>> {
    let mut r = Reader::default();
    let mut out = StatusFile::new();
    if let Some(top) = r.table(tree, "") {
        for (user_id, entry) in top {
            let path = user_id.as_str();
            let Some(t) = r.table(entry, path) else { continue };
            r.check_keys(t, path, &["completedSessions", "sessionOrder"]);
            let completed = match t.get("completedSessions") {
                None => Vec::new(),
                Some(v) => id_list(&mut r, v, &join(path, "completedSessions")),
            };
            let order = t
                .get("sessionOrder")
                .map(|v| id_list(&mut r, v, &join(path, "sessionOrder")));
            let status = UserStatus {
                user_id: user_id.clone(),
                completed_sessions: completed,
                session_order: order,
            };
            if let Some(sessions) = sessions {
                if let Err(e) = check_status(&status, sessions) {
                    r.error(path, e.to_string());
                }
            }
            out.insert(user_id.clone(), status);
        }
    }
    if r.has_errors() {
        Err(r.diags)
    } else {
        Ok(Loaded {
            value: out,
            warnings: r.diags,
        })
    }
}

fn id_list(r: &mut Reader, v: &Value, path: &str) -> Vec<String> {
    let Some(items) = r.list(v, path) else {
        return Vec::new();
    };
    items
        .iter()
        .enumerate()
        .filter_map(|(i, v)| r.text(v, &format!("{path}[{i}]")))
        .collect()
}

pub fn status_to_value(status: &StatusFile) -> Value {
    let ids = |v: &[String]| Value::List(v.iter().map(|s| s.as_str().into()).collect());
    Value::Table(
        status
            .iter()
            .map(|(user, s)| {
                let mut t = Table::new();
                t.insert("completedSessions".into(), ids(&s.completed_sessions));
                if let Some(order) = &s.session_order {
                    t.insert("sessionOrder".into(), ids(order));
                }
                (user.clone(), Value::Table(t))
            })
            .collect(),
    )
}

fn check_status(status: &UserStatus, sessions: &[SessionSpec]) -> Result<(), ProgressError> {
    let known = |id: &str| sessions.iter().any(|s| s.id == id);
    if let Some(id) = status.completed_sessions.iter().find(|id| !known(id)) {
        return Err(ProgressError::UnknownSession(id.clone()));
    }
    if let Some(order) = &status.session_order {
        if let Some(id) = order.iter().find(|id| !known(id)) {
            return Err(ProgressError::UnknownSession(id.clone()));
        }
        let mut sorted = order.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != order.len() || order.len() != sessions.len() {
            return Err(ProgressError::BadOrder(status.user_id.clone()));
        }
    }
    Ok(())
}

/// Order in which a user runs the sessions: the explicit `sessionOrder` if
/// present, otherwise a permutation seeded by `(seed, userId)` only.
pub fn session_order(
    status: &UserStatus,
    sessions: &[SessionSpec],
    seed: u64,
) -> Result<Vec<String>, ProgressError> {
    check_status(status, sessions)?;
    if let Some(order) = &status.session_order {
        return Ok(order.clone());
    }
    let mut ids: Vec<String> = sessions.iter().map(|s| s.id.clone()).collect();
    let mut rng = seed::rng(seed::mix(seed, &[seed::text_hash(&status.user_id)]));
    ids.shuffle(&mut rng);
    Ok(ids)
}

/// First uncompleted session in the user's order, or `None` when all are done.
pub fn next_session<'s>(
    status: &UserStatus,
    sessions: &'s [SessionSpec],
    seed: u64,
) -> Result<Option<&'s SessionSpec>, ProgressError> {
    let order = session_order(status, sessions, seed)?;
    Ok(order
        .iter()
        .find(|id| !status.is_completed(id))
        .and_then(|id| sessions.iter().find(|s| &s.id == id)))
}

/// Records `session_id` as completed; completing twice is a no-op.
pub fn mark_completed(
    status: &UserStatus,
    session_id: &str,
    sessions: &[SessionSpec],
) -> Result<UserStatus, ProgressError> {
    if !sessions.iter().any(|s| s.id == session_id) {
        return Err(ProgressError::UnknownSession(session_id.to_owned()));
    }
    let mut next = status.clone();
    if !next.is_completed(session_id) {
        next.completed_sessions.push(session_id.to_owned());
    }
    Ok(next)
}
