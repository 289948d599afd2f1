//! `key = value` run configuration. Command-line flags take precedence
//! over the file; the seed falls back to `MNSBM_SEED` and then 0.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{io_at, CliResult, Failure};

pub const SEED_ENV: &str = "MNSBM_SEED";

#[derive(Debug, Default)]
pub struct Overrides {
    values: BTreeMap<String, String>,
    source: String,
}

impl Overrides {
    /// Reads `path` if given. Blank lines and `#` comments are skipped;
    /// keys are the long flag names (`iters`, `out-dir`, ...) and must be
    /// among `allowed`.
    pub fn load(path: Option<&Path>, allowed: &[&str]) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Overrides::default());
        };
        let text = io_at(path, std::fs::read_to_string(path))?;
        let mut values = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Failure::usage(format!("{}:{}: expected key = value", path.display(), k + 1))
            })?;
            let key = key.trim().replace('_', "-");
            if !allowed.contains(&key.as_str()) {
                return Err(Failure::usage(format!(
                    "{}:{}: unknown key `{key}` (expected one of: {})",
                    path.display(),
                    k + 1,
                    allowed.join(", ")
                )));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Overrides {
            values,
            source: path.display().to_string(),
        })
    }

    fn parsed<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Failure::usage(format!("{}: invalid value `{v}` for `{key}`", self.source))),
        }
    }

    /// Flag value, else file value, else `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> CliResult<T> {
        Ok(match flag {
            Some(v) => v,
            None => self.parsed(key)?.unwrap_or(default),
        })
    }

    /// Like [`pick`](Self::pick) without a default.
    pub fn pick_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        Ok(match flag {
            Some(v) => Some(v),
            None => self.parsed(key)?,
        })
    }

    pub fn flag(&self, set: bool, key: &str) -> CliResult<bool> {
        Ok(set || self.parsed::<bool>(key)?.unwrap_or(false))
    }

    pub fn seed(&self, flag: Option<u64>) -> CliResult<u64> {
        if let Some(s) = self.pick_opt(flag, "seed")? {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Failure::usage(format!("{SEED_ENV}={v} is not an unsigned integer"))),
            Err(_) => Ok(0),
        }
    }
}

/// Comma-separated list, e.g. `0,0.3,0.6`.
pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| t.trim().parse().map_err(|_| format!("invalid list entry `{t}`")))
        .collect()
}
