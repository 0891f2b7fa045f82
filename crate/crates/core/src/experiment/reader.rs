use super::{ConfigDiagnostic, Range};
use crate::anyconf::{Severity, Table, Value};

/// Collects diagnostics while pulling typed fields out of value tables.
#[derive(Default)]
pub(super) struct Reader {
    pub diags: Vec<ConfigDiagnostic>,
}

pub(super) fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_owned()
    } else {
        format!("{path}.{key}")
    }
}

impl Reader {
    pub fn error(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.diags.push(ConfigDiagnostic {
            severity: Severity::Error,
            path: path.into(),
            message: message.into(),
        });
    }

    pub fn warn(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.diags.push(ConfigDiagnostic {
            severity: Severity::Warning,
            path: path.into(),
            message: message.into(),
        });
    }

    pub fn has_errors(&self) -> bool {
        self.diags.iter().any(|d| d.severity == Severity::Error)
    }

    /// Warns about every key of `table` not listed in `known`.
    pub fn check_keys(&mut self, table: &Table, path: &str, known: &[&str]) {
        for key in table.keys() {
            if !known.contains(&key.as_str()) {
                self.warn(join(path, key), "unknown key ignored");
            }
        }
    }

    pub fn table<'v>(&mut self, v: &'v Value, path: &str) -> Option<&'v Table> {
        match v {
            Value::Table(t) => Some(t),
            other => {
                self.error(path, format!("expected a table, found {}", other.kind_name()));
                None
            }
        }
    }

    pub fn required<'v>(&mut self, t: &'v Table, path: &str, key: &str) -> Option<&'v Value> {
        let v = t.get(key);
        if v.is_none() {
            self.error(join(path, key), "required");
        }
        v
    }

    pub fn number(&mut self, v: &Value, path: &str) -> Option<f64> {
        match v {
            Value::Number(n) => Some(*n),
            other => {
                self.error(path, format!("expected a number, found {}", other.kind_name()));
                None
            }
        }
    }

    pub fn opt_number(&mut self, t: &Table, path: &str, key: &str, default: f64) -> f64 {
        match t.get(key) {
            None => default,
            Some(v) => self.number(v, &join(path, key)).unwrap_or(default),
        }
    }

    pub fn opt_bool(&mut self, t: &Table, path: &str, key: &str, default: bool) -> bool {
        match t.get(key) {
            None => default,
            Some(Value::Bool(b)) => *b,
            Some(other) => {
                self.error(
                    join(path, key),
                    format!("expected true or false, found {}", other.kind_name()),
                );
                default
            }
        }
    }

    pub fn text(&mut self, v: &Value, path: &str) -> Option<String> {
        match v {
            Value::Text(s) => Some(s.clone()),
            other => {
                self.error(path, format!("expected text, found {}", other.kind_name()));
                None
            }
        }
    }

    pub fn list<'v>(&mut self, v: &'v Value, path: &str) -> Option<&'v [Value]> {
        match v {
            Value::List(items) => Some(items),
            other => {
                self.error(path, format!("expected a list, found {}", other.kind_name()));
                None
            }
        }
    }

    /// Reads a whole number within `[min, u32::MAX]`.
    pub fn integer(&mut self, v: &Value, path: &str, min: u32) -> Option<u32> {
        let n = self.number(v, path)?;
        if n.fract() != 0.0 || n < f64::from(min) || n > f64::from(u32::MAX) {
            self.error(path, format!("expected a whole number >= {min}, found {n}"));
            return None;
        }
        Some(n as u32)
    }

    pub fn opt_integer(&mut self, t: &Table, path: &str, key: &str, min: u32, default: u32) -> u32 {
        match t.get(key) {
            None => default,
            Some(v) => self.integer(v, &join(path, key), min).unwrap_or(default),
        }
    }

    /// A range is `{min, max}`, `[min, max]`, or a bare number for a fixed value.
    pub fn range(&mut self, v: &Value, path: &str) -> Option<Range> {
        let (min, max) = match v {
            Value::Number(n) => (*n, *n),
            Value::List(items) if items.len() == 2 => {
                (self.number(&items[0], path)?, self.number(&items[1], path)?)
            }
            Value::Table(t) => {
                self.check_keys(t, path, &["min", "max"]);
                let min = self.required(t, path, "min");
                let max = self.required(t, path, "max");
                let (min, max) = (min?, max?);
                (
                    self.number(min, &join(path, "min"))?,
                    self.number(max, &join(path, "max"))?,
                )
            }
            other => {
                self.error(
                    path,
                    format!(
                        "expected a range ({{min, max}}, [min, max] or a number), found {}",
                        other.kind_name()
                    ),
                );
                return None;
            }
        };
        if min > max {
            self.error(path, format!("min {min} exceeds max {max}"));
            return None;
        }
        Some(Range { min, max })
    }

    pub fn opt_range(&mut self, t: &Table, path: &str, key: &str, default: Range) -> Range {
        match t.get(key) {
            None => default,
            Some(v) => self.range(v, &join(path, key)).unwrap_or(default),
        }
    }

    /// Checks `lo <(=) value` for every endpoint of a range.
    pub fn range_bound(&mut self, r: Range, path: &str, lower: f64, strict: bool) {
        let ok = if strict { r.min > lower } else { r.min >= lower };
        if !ok {
            let op = if strict { ">" } else { ">=" };
            self.error(path, format!("values must be {op} {lower}, found min {}", r.min));
        }
    }

    pub fn bound(&mut self, v: f64, path: &str, lower: f64, strict: bool) {
        let ok = if strict { v > lower } else { v >= lower };
        if !ok {
            let op = if strict { ">" } else { ">=" };
            self.error(path, format!("must be {op} {lower}, found {v}"));
        }
    }
}
