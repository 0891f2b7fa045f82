//! AnyLite: a small, human-editable superset of JSON.
//!
//! Accepted on top of plain JSON:
//!
//! * `// line` and `/* block */` comments (block comments do not nest),
//! * unquoted table keys matching `[A-Za-z_][A-Za-z0-9_]*`,
//! * trailing commas in lists and tables,
//! * `=` as an alternative to `:` between a key and its value.
//!
//! Parsing is all-or-nothing: either a full [`Value`] tree comes back, or a
//! list of positioned [`Diagnostic`]s.  [`serialize`] always emits plain JSON.

mod parse;
mod serialize;
mod value;

pub use parse::parse;
pub use serialize::{serialize, serialize_pretty};
pub use value::{Table, Value};

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Warning => f.write_str("warning"),
            Severity::Error => f.write_str("error"),
        }
    }
}

/// A message anchored at a 1-based line and column (columns count characters).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn error(line: usize, column: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}: {}",
            self.line, self.column, self.severity, self.message
        )
    }
}
