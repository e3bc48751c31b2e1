//! Rendering and atomic writing of run artifacts.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Format;
use crate::error::CliResult;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rows of pre-formatted cells.
#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Seventeen significant digits, enough to recover the exact double.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// What a command hands back for rendering.
pub struct Outcome {
    pub result: Value,
    pub table: Table,
    /// Failed checks; any entry turns the exit status into a validation failure.
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn new(result: impl Serialize, table: Table) -> CliResult<Self> {
        Ok(Outcome {
            result: serde_json::to_value(result)?,
            table,
            failures: Vec::new(),
        })
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

pub fn render(command: &str, config: &Value, outcome: &Outcome, format: Format) -> CliResult<String> {
    match format {
        Format::Json => {
            let doc = json!({
                "command": command,
                "version": VERSION,
                "config": config,
                "failures": outcome.failures,
                "result": outcome.result,
            });
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut s = format!("# qudit {command} {VERSION}\n# config: {}\n", serde_json::to_string(config)?);
            for f in &outcome.failures {
                s.push_str(&format!("# failed: {f}\n"));
            }
            s.push_str(&outcome.table.columns.join(","));
            s.push('\n');
            for row in &outcome.table.rows {
                s.push_str(&row.join(","));
                s.push('\n');
            }
            Ok(s)
        }
    }
}

/// Writes through a temporary file in the target directory, then renames it into place.
pub fn write_atomic(path: &Path, content: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(content.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
