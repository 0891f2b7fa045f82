use super::reader::{join, Reader};
use super::*;
use crate::agent::AgentParams;
use crate::anyconf::{Table, Value};
use crate::psychophys::StaircaseConfig;

/// Values used for optional keys that are absent from a config.
pub struct Defaults {
    pub ready_duration: f64,
    pub task_duration: f64,
    pub feedback_duration: f64,
    pub target_health: f64,
    pub weapon: WeaponSpec,
    pub speed: Range,
    pub motion_change_period: Range,
    pub distance: Range,
    pub visual_radius: Range,
    pub spawn_azimuth: Range,
    pub spawn_elevation: Range,
    pub jump_speed: Range,
    pub jump_period: Range,
    pub gravity: f64,
}

pub const DEFAULTS: Defaults = Defaults {
    ready_duration: 0.5,
    task_duration: 6.0,
    feedback_duration: 1.0,
    target_health: 1.0,
    weapon: WeaponSpec {
        ammo_per_trial: Ammo::Limited(6),
        fire_period: 0.5,
        damage_per_second: 2.0,
        auto_fire: false,
    },
    speed: Range::fixed(0.0),
    motion_change_period: Range::new(1.0, 2.0),
    distance: Range::fixed(10.0),
    visual_radius: Range::fixed(0.3),
    spawn_azimuth: Range::new(-20.0, 20.0),
    spawn_elevation: Range::new(-5.0, 5.0),
    jump_speed: Range::fixed(2.0),
    jump_period: Range::new(1.0, 2.0),
    gravity: 9.8,
};

const TOP_KEYS: &[&str] = &[
    "description",
    "scene",
    "sessionOrdering",
    "readyDuration",
    "taskDuration",
    "feedbackDuration",
    "targetHealth",
    "weapon",
    "targets",
    "sessions",
];

const WEAPON_KEYS: &[&str] = &["ammoPerTrial", "firePeriod", "damagePerSecond", "autoFire"];

const TARGET_KEYS: &[&str] = &[
    "id",
    "speed",
    "motionChangePeriod",
    "distance",
    "visualRadius",
    "spawnAzimuth",
    "spawnElevation",
    "horizontalLock",
    "jumpEnabled",
    "jumpSpeed",
    "jumpPeriod",
    "gravity",
];

const SESSION_KEYS: &[&str] = &[
    "id",
    "kind",
    "frameRate",
    "frameDelay",
    "refreshRate",
    "trials",
    "staircase",
    "agent",
];

const STAIRCASE_KEYS: &[&str] = &[
    "parameter",
    "startLevel",
    "stepSize",
    "nUp",
    "nDown",
    "minLevel",
    "maxLevel",
    "reversals",
];

const AGENT_KEYS: &[&str] = &[
    "reactionTime",
    "pursuitGain",
    "maxTurnRate",
    "motorNoiseSigma",
    "fireThreshold",
    "seed",
];

/// Largest integer every f64 represents exactly.
const MAX_EXACT_INT: f64 = 9_007_199_254_740_992.0;

/// Validates an experiment tree and fills defaults.
///
/// Unknown keys become warnings. Any error fails the whole load; the error
/// list then also carries the warnings seen so far.
pub fn load_experiment(tree: &Value) -> Result<Loaded<ExperimentConfig>, Vec<ConfigDiagnostic>> {
    let mut r = Reader::default();
    let config = read_experiment(&mut r, tree);
    match config {
        Some(value) if !r.has_errors() => Ok(Loaded {
            value,
            warnings: r.diags,
        }),
        _ => Err(r.diags),
    }
}

fn read_experiment(r: &mut Reader, tree: &Value) -> Option<ExperimentConfig> {
    let top = r.table(tree, "")?;
    r.check_keys(top, "", TOP_KEYS);
    if top.contains_key("scene") {
        r.warn("scene", "scene selection is not simulated; value ignored");
    }
    if let Some(v) = top.get("sessionOrdering") {
        if v.as_str() != Some("random") {
            r.warn(
                "sessionOrdering",
                "only \"random\" ordering is supported; using random",
            );
        }
    }

    let description = match top.get("description") {
        Some(v) => r.text(v, "description").unwrap_or_default(),
        None => String::new(),
    };
    let ready_duration = r.opt_number(top, "", "readyDuration", DEFAULTS.ready_duration);
    let task_duration = r.opt_number(top, "", "taskDuration", DEFAULTS.task_duration);
    let feedback_duration = r.opt_number(top, "", "feedbackDuration", DEFAULTS.feedback_duration);
    let target_health = r.opt_number(top, "", "targetHealth", DEFAULTS.target_health);
    r.bound(ready_duration, "readyDuration", 0.0, false);
    r.bound(task_duration, "taskDuration", 0.0, true);
    r.bound(feedback_duration, "feedbackDuration", 0.0, false);
    r.bound(target_health, "targetHealth", 0.0, true);

    let weapon = match top.get("weapon") {
        Some(v) => read_weapon(r, v),
        None => Some(DEFAULTS.weapon.clone()),
    };

    let targets = r
        .required(top, "", "targets")
        .and_then(|v| read_targets(r, v));
    let sessions = r
        .required(top, "", "sessions")
        .and_then(|v| read_sessions(r, v, targets.as_deref().unwrap_or(&[])));

    Some(ExperimentConfig {
        description,
        ready_duration,
        task_duration,
        feedback_duration,
        target_health,
        weapon: weapon?,
        targets: targets?,
        sessions: sessions?,
    })
}

fn read_weapon(r: &mut Reader, v: &Value) -> Option<WeaponSpec> {
    let path = "weapon";
    let t = r.table(v, path)?;
    r.check_keys(t, path, WEAPON_KEYS);
    let d = &DEFAULTS.weapon;
    let ammo_per_trial = match t.get("ammoPerTrial") {
        None => d.ammo_per_trial,
        Some(Value::Text(s)) if s == "unlimited" => Ammo::Unlimited,
        Some(v) => Ammo::Limited(
            r.integer(v, "weapon.ammoPerTrial", 1)
                .unwrap_or(match d.ammo_per_trial {
                    Ammo::Limited(n) => n,
                    Ammo::Unlimited => 1,
                }),
        ),
    };
    let fire_period = r.opt_number(t, path, "firePeriod", d.fire_period);
    let damage_per_second = r.opt_number(t, path, "damagePerSecond", d.damage_per_second);
    let auto_fire = r.opt_bool(t, path, "autoFire", d.auto_fire);
    r.bound(fire_period, "weapon.firePeriod", 0.0, false);
    r.bound(damage_per_second, "weapon.damagePerSecond", 0.0, true);
    if !auto_fire && fire_period == 0.0 {
        r.warn(
            "weapon.firePeriod",
            "single-shot weapon with firePeriod 0 deals no damage per shot",
        );
    }
    Some(WeaponSpec {
        ammo_per_trial,
        fire_period,
        damage_per_second,
        auto_fire,
    })
}

fn read_targets(r: &mut Reader, v: &Value) -> Option<Vec<TargetMotionSpec>> {
    let items = r.list(v, "targets")?;
    if items.is_empty() {
        r.error("targets", "at least one target motion is required");
        return None;
    }
    let mut out: Vec<TargetMotionSpec> = Vec::with_capacity(items.len());
    let mut ok = true;
    for (i, item) in items.iter().enumerate() {
        let path = format!("targets[{i}]");
        match read_target(r, item, &path) {
            Some(t) => {
                if out.iter().any(|o| o.id == t.id) {
                    r.error(join(&path, "id"), format!("duplicate target id `{}`", t.id));
                    ok = false;
                }
                out.push(t);
            }
            None => ok = false,
        }
    }
    ok.then_some(out)
}

fn read_target(r: &mut Reader, v: &Value, path: &str) -> Option<TargetMotionSpec> {
    let t = r.table(v, path)?;
    r.check_keys(t, path, TARGET_KEYS);
    let id = r
        .required(t, path, "id")
        .and_then(|v| r.text(v, &join(path, "id")));
    let d = &DEFAULTS;
    let spec = TargetMotionSpec {
        id: id?,
        speed: r.opt_range(t, path, "speed", d.speed),
        motion_change_period: r.opt_range(t, path, "motionChangePeriod", d.motion_change_period),
        distance: r.opt_range(t, path, "distance", d.distance),
        visual_radius: r.opt_range(t, path, "visualRadius", d.visual_radius),
        spawn_azimuth: r.opt_range(t, path, "spawnAzimuth", d.spawn_azimuth),
        spawn_elevation: r.opt_range(t, path, "spawnElevation", d.spawn_elevation),
        horizontal_lock: r.opt_bool(t, path, "horizontalLock", false),
        jump_enabled: r.opt_bool(t, path, "jumpEnabled", false),
        jump_speed: r.opt_range(t, path, "jumpSpeed", d.jump_speed),
        jump_period: r.opt_range(t, path, "jumpPeriod", d.jump_period),
        gravity: r.opt_number(t, path, "gravity", d.gravity),
    };
    for field in TargetField::ALL {
        let range = spec.range(field);
        let p = join(path, field.key());
        if let Some((lower, strict)) = field_lower_bound(field) {
            r.range_bound(range, &p, lower, strict);
        }
        if field == TargetField::SpawnElevation && (range.min < -90.0 || range.max > 90.0) {
            r.error(p, "elevation must lie within [-90, 90]");
        }
    }
    r.bound(spec.gravity, &join(path, "gravity"), 0.0, true);
    Some(spec)
}

/// Lower limit (value, strict) each ranged field must respect.
fn field_lower_bound(field: TargetField) -> Option<(f64, bool)> {
    match field {
        TargetField::Speed | TargetField::JumpSpeed => Some((0.0, false)),
        TargetField::MotionChangePeriod
        | TargetField::Distance
        | TargetField::VisualRadius
        | TargetField::JumpPeriod => Some((0.0, true)),
        TargetField::SpawnAzimuth => None,
        TargetField::SpawnElevation => Some((-90.0, false)),
    }
}

fn read_sessions(
    r: &mut Reader,
    v: &Value,
    targets: &[TargetMotionSpec],
) -> Option<Vec<SessionSpec>> {
    let items = r.list(v, "sessions")?;
    if items.is_empty() {
        r.error("sessions", "at least one session is required");
        return None;
    }
    let mut out: Vec<SessionSpec> = Vec::with_capacity(items.len());
    let mut ok = true;
    for (i, item) in items.iter().enumerate() {
        let path = format!("sessions[{i}]");
        match read_session(r, item, &path, targets) {
            Some(s) => {
                if out.iter().any(|o| o.id == s.id) {
                    r.error(join(&path, "id"), format!("duplicate session id `{}`", s.id));
                    ok = false;
                }
                out.push(s);
            }
            None => ok = false,
        }
    }
    ok.then_some(out)
}

fn read_session(
    r: &mut Reader,
    v: &Value,
    path: &str,
    targets: &[TargetMotionSpec],
) -> Option<SessionSpec> {
    let t = r.table(v, path)?;
    r.check_keys(t, path, SESSION_KEYS);
    let id = r
        .required(t, path, "id")
        .and_then(|v| r.text(v, &join(path, "id")));
    let kind = match t.get("kind") {
        None => Some(SessionKind::Real),
        Some(v) => match r.text(v, &join(path, "kind")).as_deref() {
            Some("training") => Some(SessionKind::Training),
            Some("real") => Some(SessionKind::Real),
            Some(other) => {
                r.error(
                    join(path, "kind"),
                    format!("expected \"training\" or \"real\", found \"{other}\""),
                );
                None
            }
            None => None,
        },
    };
    let frame_rate = r
        .required(t, path, "frameRate")
        .and_then(|v| r.number(v, &join(path, "frameRate")));
    if let Some(f) = frame_rate {
        r.bound(f, &join(path, "frameRate"), 0.0, true);
    }
    let frame_delay = r.opt_integer(t, path, "frameDelay", 0, 0);
    let refresh_rate = r.opt_number(t, path, "refreshRate", frame_rate.unwrap_or(1.0));
    r.bound(refresh_rate, &join(path, "refreshRate"), 0.0, true);

    let trials = r
        .required(t, path, "trials")
        .and_then(|v| read_trial_sets(r, v, &join(path, "trials"), targets));
    let staircase = match t.get("staircase") {
        None => Some(None),
        Some(v) => read_staircase(r, v, &join(path, "staircase"), targets).map(Some),
    };
    let agent = match t.get("agent") {
        None => Some(AgentParams::default()),
        Some(v) => read_agent(r, v, &join(path, "agent")),
    };

    Some(SessionSpec {
        id: id?,
        kind: kind?,
        frame_rate: frame_rate?,
        frame_delay,
        refresh_rate,
        trials: trials?,
        staircase: staircase?,
        agent: agent?,
    })
}

fn read_trial_sets(
    r: &mut Reader,
    v: &Value,
    path: &str,
    targets: &[TargetMotionSpec],
) -> Option<Vec<TrialSet>> {
    let items = r.list(v, path)?;
    if items.is_empty() {
        r.error(path, "at least one trial set is required");
        return None;
    }
    let mut out = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let Some(t) = r.table(item, &p) else { continue };
        r.check_keys(t, &p, &["targetMotionId", "count"]);
        let id = r
            .required(t, &p, "targetMotionId")
            .and_then(|v| r.text(v, &join(&p, "targetMotionId")));
        let count = r
            .required(t, &p, "count")
            .and_then(|v| r.integer(v, &join(&p, "count"), 1));
        if let Some(id) = &id {
            if !targets.iter().any(|t| &t.id == id) {
                r.error(
                    join(&p, "targetMotionId"),
                    format!("unresolved target id `{id}`"),
                );
            }
        }
        if let (Some(target_motion_id), Some(count)) = (id, count) {
            out.push(TrialSet {
                target_motion_id,
                count,
            });
        }
    }
    (out.len() == items.len()).then_some(out)
}

fn read_staircase(
    r: &mut Reader,
    v: &Value,
    path: &str,
    targets: &[TargetMotionSpec],
) -> Option<SessionStaircase> {
    let t = r.table(v, path)?;
    r.check_keys(t, path, STAIRCASE_KEYS);
    let param_path = join(path, "parameter");
    let binding = r
        .required(t, path, "parameter")
        .and_then(|v| r.text(v, &param_path))
        .and_then(|p| {
            let parts: Vec<&str> = p.split('/').collect();
            match parts.as_slice() {
                ["targets", id, key] => {
                    let field = TargetField::from_key(key);
                    if field.is_none() {
                        r.error(
                            &param_path,
                            format!("`{key}` is not a ranged target parameter"),
                        );
                    }
                    if !targets.iter().any(|t| t.id == *id) {
                        r.error(&param_path, format!("unresolved target id `{id}`"));
                        return None;
                    }
                    field.map(|f| ((*id).to_owned(), f))
                }
                _ => {
                    r.error(
                        &param_path,
                        format!("expected \"targets/<id>/<parameter>\", found \"{p}\""),
                    );
                    None
                }
            }
        });

    let num = |r: &mut Reader, key: &str| {
        r.required(t, path, key)
            .and_then(|v| r.number(v, &join(path, key)))
    };
    let start_level = num(r, "startLevel");
    let step_size = num(r, "stepSize");
    let min_level = num(r, "minLevel");
    let max_level = num(r, "maxLevel");
    let n_up = r.opt_integer(t, path, "nUp", 1, 1);
    let n_down = r.opt_integer(t, path, "nDown", 1, 2);
    let target_reversals = r.opt_integer(t, path, "reversals", 2, 9);

    let (target_id, field) = binding?;
    let config = StaircaseConfig {
        start_level: start_level?,
        step_size: step_size?,
        n_up,
        n_down,
        min_level: min_level?,
        max_level: max_level?,
        target_reversals,
    };
    if let Err(e) = config.validate() {
        r.error(path, e.to_string());
        return None;
    }
    if let Some((lower, strict)) = field_lower_bound(field) {
        let bad = if strict {
            config.min_level <= lower
        } else {
            config.min_level < lower
        };
        if bad {
            r.error(
                join(path, "minLevel"),
                format!("{} levels must be {} {lower}", field.key(), if strict { ">" } else { ">=" }),
            );
        }
    }
    Some(SessionStaircase {
        target_id,
        field,
        config,
    })
}

fn read_agent(r: &mut Reader, v: &Value, path: &str) -> Option<AgentParams> {
    let t = r.table(v, path)?;
    r.check_keys(t, path, AGENT_KEYS);
    let d = AgentParams::default();
    let reaction_time = r.opt_number(t, path, "reactionTime", d.reaction_time);
    let pursuit_gain = r.opt_number(t, path, "pursuitGain", d.pursuit_gain);
    let max_turn_rate = r.opt_number(t, path, "maxTurnRate", d.max_turn_rate);
    let motor_noise_sigma = r.opt_number(t, path, "motorNoiseSigma", d.motor_noise_sigma);
    let fire_threshold = r.opt_number(t, path, "fireThreshold", d.fire_threshold);
    r.bound(reaction_time, &join(path, "reactionTime"), 0.0, false);
    r.bound(pursuit_gain, &join(path, "pursuitGain"), 0.0, true);
    r.bound(max_turn_rate, &join(path, "maxTurnRate"), 0.0, true);
    r.bound(motor_noise_sigma, &join(path, "motorNoiseSigma"), 0.0, false);
    r.bound(fire_threshold, &join(path, "fireThreshold"), 0.0, true);
    let seed = match t.get("seed") {
        None => d.seed,
        Some(v) => {
            let p = join(path, "seed");
            let n = r.number(v, &p)?;
            if n.fract() != 0.0 || !(0.0..=MAX_EXACT_INT).contains(&n) {
                r.error(p, format!("expected a whole number in [0, 2^53], found {n}"));
                return None;
            }
            n as u64
        }
    };
    Some(AgentParams {
        reaction_time,
        pursuit_gain,
        max_turn_rate,
        motor_noise_sigma,
        fire_threshold,
        seed,
    })
}

fn range_value(r: Range) -> Value {
    let mut t = Table::new();
    t.insert("min".into(), r.min.into());
    t.insert("max".into(), r.max.into());
    Value::Table(t)
}

fn table(pairs: Vec<(&str, Value)>) -> Value {
    Value::Table(pairs.into_iter().map(|(k, v)| (k.to_owned(), v)).collect())
}

/// Renders a config with every default written out.
pub fn experiment_to_value(c: &ExperimentConfig) -> Value {
    let weapon = table(vec![
        (
            "ammoPerTrial",
            match c.weapon.ammo_per_trial {
                Ammo::Limited(n) => f64::from(n).into(),
                Ammo::Unlimited => "unlimited".into(),
            },
        ),
        ("firePeriod", c.weapon.fire_period.into()),
        ("damagePerSecond", c.weapon.damage_per_second.into()),
        ("autoFire", c.weapon.auto_fire.into()),
    ]);
    let targets = c
        .targets
        .iter()
        .map(|t| {
            let mut pairs = vec![("id", Value::from(t.id.as_str()))];
            for f in TargetField::ALL {
                pairs.push((f.key(), range_value(t.range(f))));
            }
            pairs.push(("horizontalLock", t.horizontal_lock.into()));
            pairs.push(("jumpEnabled", t.jump_enabled.into()));
            pairs.push(("gravity", t.gravity.into()));
            table(pairs)
        })
        .collect();
    let sessions = c
        .sessions
        .iter()
        .map(|s| {
            let trials = s
                .trials
                .iter()
                .map(|ts| {
                    table(vec![
                        ("targetMotionId", ts.target_motion_id.as_str().into()),
                        ("count", f64::from(ts.count).into()),
                    ])
                })
                .collect();
            let a = &s.agent;
            let mut pairs = vec![
                ("id", Value::from(s.id.as_str())),
                ("kind", s.kind.as_str().into()),
                ("frameRate", s.frame_rate.into()),
                ("frameDelay", f64::from(s.frame_delay).into()),
                ("refreshRate", s.refresh_rate.into()),
                ("trials", Value::List(trials)),
                (
                    "agent",
                    table(vec![
                        ("reactionTime", a.reaction_time.into()),
                        ("pursuitGain", a.pursuit_gain.into()),
                        ("maxTurnRate", a.max_turn_rate.into()),
                        ("motorNoiseSigma", a.motor_noise_sigma.into()),
                        ("fireThreshold", a.fire_threshold.into()),
                        ("seed", (a.seed as f64).into()),
                    ]),
                ),
            ];
            if let Some(sc) = &s.staircase {
                let k = &sc.config;
                pairs.push((
                    "staircase",
                    table(vec![
                        ("parameter", sc.parameter_path().into()),
                        ("startLevel", k.start_level.into()),
                        ("stepSize", k.step_size.into()),
                        ("nUp", f64::from(k.n_up).into()),
                        ("nDown", f64::from(k.n_down).into()),
                        ("minLevel", k.min_level.into()),
                        ("maxLevel", k.max_level.into()),
                        ("reversals", f64::from(k.target_reversals).into()),
                    ]),
                ));
            }
            table(pairs)
        })
        .collect();
    table(vec![
        ("description", c.description.as_str().into()),
        ("readyDuration", c.ready_duration.into()),
        ("taskDuration", c.task_duration.into()),
        ("feedbackDuration", c.feedback_duration.into()),
        ("targetHealth", c.target_health.into()),
        ("weapon", weapon),
        ("targets", Value::List(targets)),
        ("sessions", Value::List(sessions)),
    ])
}
