//! Flat key-value config files: `key = value` lines, `#` comments.
//! Keys mirror the long command-line flags; flags win over the file.

use std::collections::HashMap;
use std::path::Path;

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

pub const KNOWN_KEYS: &[&str] = &[
    "N",
    "xi",
    "xi-min",
    "xi-max",
    "xi-step",
    "nu",
    "source",
    "kind",
    "axis",
    "range",
    "step",
    "out",
    "threads",
    "tol",
    "integrator",
    "format",
    "samples",
];

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!(
                    "config line {}: expected `key = value`, got {raw:?}",
                    lineno + 1
                ));
            };
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(format!("config line {}: unknown key {key:?}", lineno + 1));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }
}

/// Resolve one setting: flag value, else config entry, else default.
pub fn resolve<T, F>(
    flag: Option<T>,
    config: Option<&str>,
    parse: F,
    default: T,
) -> Result<T, String>
where
    F: Fn(&str) -> Result<T, String>,
{
    match flag {
        Some(v) => Ok(v),
        None => match config {
            Some(raw) => parse(raw),
            None => Ok(default),
        },
    }
}
