use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Keys accepted in a config file; each mirrors the long flag of the same name.
pub const KEYS: &[&str] = &[
    "space",
    "mapping",
    "scheme",
    "schedule",
    "alpha",
    "beta",
    "x0",
    "u0",
    "n-max",
    "tolerance",
    "inner",
    "output",
    "format",
    "digits",
    "verify",
    "paper-rows",
    "assert-faster",
    "horizon",
    "threshold",
    "literal",
    "delta",
    "d0",
    "perturb",
    "proof-variant",
    "samples",
    "seed",
];

/// A flat `key = value` file. Blank lines and lines starting with `#` are skipped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", i + 1)))?;
            let key = k.trim().to_string();
            if !KEYS.contains(&key.as_str()) {
                return Err(Error::UnknownName {
                    kind: "config key",
                    name: key,
                });
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn string(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.get(key).map(str::to_string))
    }

    pub fn parsed<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| Error::Parse(format!("config key `{key}`: cannot parse `{v}`")))
            })
            .transpose()
    }

    /// A boolean switch: set by the flag or by `true`/`false` in the file.
    pub fn switch(&self, flag: bool, key: &str) -> Result<bool> {
        Ok(flag || self.parsed::<bool>(None, key)?.unwrap_or(false))
    }
}
