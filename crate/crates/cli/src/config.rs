//! Parameter resolution: configuration file first, explicit flags on top.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Options shared by every command.
#[derive(Args, Debug, Serialize)]
pub struct CommonArgs {
    /// JSON parameter file (or a previous artifact); explicit flags win
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Write the artifact to this path instead of standard output
    #[arg(long, short, value_name = "PATH")]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Seed for randomly drawn targets
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn parse_json(s: &str) -> Result<Value, String> {
    serde_json::from_str(s).map_err(|e| format!("not valid JSON: {e}"))
}

/// Reads `path` as a parameter object. An artifact is accepted too, in which
/// case its embedded configuration is used.
fn load(command: &str, path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("malformed JSON in {}: {e}", path.display())))?;
    let Value::Object(mut map) = value else {
        return Err(CliError::usage(format!("{} must hold a JSON object", path.display())));
    };
    if let (Some(Value::String(cmd)), true) = (map.get("command"), map.contains_key("config")) {
        if cmd != command {
            return Err(CliError::usage(format!(
                "{} is a '{cmd}' artifact, not '{command}'",
                path.display()
            )));
        }
        return Ok(map.remove("config").unwrap_or(Value::Object(Map::new())));
    }
    Ok(Value::Object(map))
}

/// Copies every non-null entry of `top` into `base`, recursing into objects.
fn overlay(base: &mut Value, top: Value) {
    match (base, top) {
        (Value::Object(b), Value::Object(t)) => {
            for (k, v) in t {
                if v.is_null() {
                    continue;
                }
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => overlay(slot, v),
                    _ => {
                        let mut fresh = if v.is_object() { Value::Object(Map::new()) } else { Value::Null };
                        overlay(&mut fresh, v);
                        b.insert(k, fresh);
                    }
                }
            }
        }
        (b, t) if !t.is_null() => *b = t,
        _ => {}
    }
}

pub fn resolve<A: Serialize, C: DeserializeOwned>(command: &str, args: &A, file: Option<&Path>) -> CliResult<C> {
    let mut merged = match file {
        Some(p) => load(command, p)?,
        None => Value::Object(Map::new()),
    };
    overlay(&mut merged, serde_json::to_value(args)?);
    serde_json::from_value(merged).map_err(|e| CliError::usage(format!("invalid {command} configuration: {e}")))
}
