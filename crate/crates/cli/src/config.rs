//! Flat `key = value` configuration files.
//!
//! ```text
//! # long window, type I
//! alpha = pi/2
//! c = 0.8
//! sigma = 0.05
//! window_T = 100*2pi
//! trials = 2000
//! seed = 42
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Command-line flags
//! take precedence over file values.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::CliError;
use crate::expr::{parse_list, parse_value};

pub const KEYS: [&str; 10] = [
    "alpha",
    "c",
    "sigma",
    "dt",
    "burn_in",
    "window_T",
    "trials",
    "seed",
    "include_ito_drift",
    "equilibration",
];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Usage(msg) => CliError::Usage(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "line {}: expected `key = value`",
                    lineno + 1
                )));
            };
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(CliError::Usage(format!(
                    "line {}: unknown key `{key}` (known keys: {})",
                    lineno + 1,
                    KEYS.join(", ")
                )));
            }
            if entries.insert(key.to_string(), value.to_string()).is_some() {
                return Err(CliError::Usage(format!(
                    "line {}: key `{key}` given twice",
                    lineno + 1
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn value(&self, key: &'static str) -> Result<Option<f64>, CliError> {
        self.raw(key).map(|v| parse_value(v).map_err(|e| keyed(key, e))).transpose()
    }

    pub fn list(&self, key: &'static str) -> Result<Option<Vec<f64>>, CliError> {
        self.raw(key).map(|v| parse_list(v).map_err(|e| keyed(key, e))).transpose()
    }

    pub fn integer(&self, key: &'static str) -> Result<Option<u64>, CliError> {
        self.raw(key)
            .map(|v| {
                v.parse::<u64>()
                    .map_err(|_| CliError::Usage(format!("config key `{key}`: `{v}` is not a non-negative integer")))
            })
            .transpose()
    }

    pub fn flag(&self, key: &'static str) -> Result<Option<bool>, CliError> {
        self.raw(key)
            .map(|v| match v {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                _ => Err(CliError::Usage(format!("config key `{key}`: `{v}` is not a boolean"))),
            })
            .transpose()
    }
}

fn keyed(key: &str, e: CliError) -> CliError {
    match e {
        CliError::Usage(msg) => CliError::Usage(format!("config key `{key}`: {msg}")),
        other => other,
    }
}
