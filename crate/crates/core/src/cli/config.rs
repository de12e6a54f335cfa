//! Run settings from flags, `GC_*` environment variables and a plain
//! `key = value` config file, in that order of precedence.

use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::MAX_VERTICES;

/// Recognized config keys; the environment variable for `key` is
/// `GC_<KEY>` in upper case.
pub const KEYS: [&str; 4] = ["seed", "jobs", "cache_dir", "truncation"];

pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Settings {
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub truncation: Option<usize>,
}

impl Settings {
    /// Fills unset fields from `lower`.
    pub fn or(self, lower: Settings) -> Settings {
        Settings {
            seed: self.seed.or(lower.seed),
            jobs: self.jobs.or(lower.jobs),
            cache_dir: self.cache_dir.or(lower.cache_dir),
            truncation: self.truncation.or(lower.truncation),
        }
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        fn num<T: FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
            value
                .parse()
                .map_err(|_| format!("`{key}` expects a non-negative integer, got `{value}`"))
        }
        match key {
            "seed" => self.seed = Some(num(key, value)?),
            "jobs" => {
                let jobs: usize = num(key, value)?;
                if jobs == 0 {
                    return Err("`jobs` must be at least 1".into());
                }
                self.jobs = Some(jobs);
            }
            "cache_dir" => {
                if value.is_empty() {
                    return Err("`cache_dir` must not be empty".into());
                }
                self.cache_dir = Some(PathBuf::from(value));
            }
            "truncation" => {
                let t: usize = num(key, value)?;
                if !(1..=MAX_VERTICES).contains(&t) {
                    return Err(format!("`truncation` must lie in 1..={MAX_VERTICES}"));
                }
                self.truncation = Some(t);
            }
            _ => return Err(format!("unknown key `{key}` (expected one of {})", KEYS.join(", "))),
        }
        Ok(())
    }

    /// Reads `GC_SEED`, `GC_JOBS`, `GC_CACHE_DIR` and `GC_TRUNCATION`.
    pub fn from_env(lookup: &dyn Fn(&str) -> Option<String>) -> Result<Settings> {
        let mut out = Settings::default();
        for key in KEYS {
            let var = format!("GC_{}", key.to_uppercase());
            if let Some(value) = lookup(&var) {
                out.set(key, &value).map_err(|m| Error::Precondition(format!("{var}: {m}")))?;
            }
        }
        Ok(out)
    }
}

impl std::fmt::Display for Settings {
    /// The set fields as config-file lines, in key order.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if let Some(v) = self.seed {
            writeln!(f, "seed = {v}")?;
        }
        if let Some(v) = self.jobs {
            writeln!(f, "jobs = {v}")?;
        }
        if let Some(v) = &self.cache_dir {
            writeln!(f, "cache_dir = {}", v.display())?;
        }
        if let Some(v) = self.truncation {
            writeln!(f, "truncation = {v}")?;
        }
        Ok(())
    }
}

/// Parses a config file: `key = value` lines, `#` comments and blank lines.
/// Unknown and repeated keys are errors.
pub fn parse_config(text: &str) -> Result<Settings> {
    let mut out = Settings::default();
    let mut seen: Vec<&str> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        let column = raw[..indent].chars().count() + 1;
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::parse(line, column, "expected `key = value`"));
        };
        let key = key.trim();
        if seen.contains(&key) {
            return Err(Error::parse(line, column, format!("repeated key `{key}`")));
        }
        out.set(key, value.trim()).map_err(|m| {
            let column = if KEYS.contains(&key) {
                let eq = raw.find('=').unwrap_or(0) + 1;
                let value = &raw[eq..];
                raw[..eq + value.len() - value.trim_start().len()].chars().count() + 1
            } else {
                column
            };
            Error::parse(line, column, m)
        })?;
        seen.push(key);
    }
    Ok(out)
}
