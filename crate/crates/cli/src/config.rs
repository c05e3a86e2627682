//! Plain-text `key=value` configuration with defaults, file overlay and
//! command-line overrides, plus the resolved snapshot that makes every run
//! reproducible from a single file.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::{CliError, CliResult};

/// Resolved string-typed configuration. Keys are fixed by the command's
/// defaults; anything else in a config file is rejected.
#[derive(Debug, Clone)]
pub struct KeyValues {
    map: BTreeMap<String, String>,
}

impl KeyValues {
    pub fn from_defaults(defaults: &[(&str, &str)]) -> Self {
        KeyValues {
            map: defaults.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        }
    }

    /// Overlay `key=value` lines from a file. Blank lines and `#` comments
    /// are allowed; unknown keys are configuration errors.
    pub fn merge_file(&mut self, path: &Path) -> CliResult<()> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!("{}:{}: expected key=value", path.display(), lineno + 1))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        match self.map.get_mut(key) {
            Some(slot) => {
                *slot = value.to_string();
                Ok(())
            }
            None => Err(CliError::Config(format!("unknown key '{key}'"))),
        }
    }

    /// Apply a command-line override when the flag was given.
    pub fn override_with<T: ToString>(&mut self, key: &str, value: &Option<T>) {
        if let Some(v) = value {
            self.map
                .get_mut(key)
                .unwrap_or_else(|| panic!("override for undeclared key '{key}'"))
                .clone_from(&v.to_string());
        }
    }

    pub fn raw(&self, key: &str) -> &str {
        &self.map[key]
    }

    pub fn parse<T: std::str::FromStr>(&self, key: &str) -> CliResult<T> {
        self.raw(key)
            .parse()
            .map_err(|_| CliError::Config(format!("key '{key}': cannot parse '{}'", self.raw(key))))
    }

    /// Comma-separated list variant of [`parse`](Self::parse).
    pub fn parse_list<T: std::str::FromStr>(&self, key: &str) -> CliResult<Vec<T>> {
        self.raw(key)
            .split(',')
            .map(|item| {
                item.trim().parse().map_err(|_| {
                    CliError::Config(format!("key '{key}': cannot parse item '{}'", item.trim()))
                })
            })
            .collect()
    }

    pub fn parse_switch(&self, key: &str) -> CliResult<bool> {
        match self.raw(key) {
            "on" => Ok(true),
            "off" => Ok(false),
            other => Err(CliError::Config(format!("key '{key}': expected on/off, got '{other}'"))),
        }
    }

    /// The snapshot written next to a run's outputs: sorted `key=value`
    /// lines, exactly re-loadable through [`merge_file`](Self::merge_file).
    pub fn snapshot(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.map {
            out.push_str(k);
            out.push('=');
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

/// Write a file atomically (temp file in the target directory, then rename).
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = path.parent().ok_or_else(|| {
        CliError::Runtime(format!("output path {} has no parent directory", path.display()))
    })?;
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))?;
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| CliError::Runtime(format!("cannot rename into {}: {e}", path.display())))?;
    Ok(())
}
