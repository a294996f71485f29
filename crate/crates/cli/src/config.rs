//! Flat `key = value` run configuration and value resolution.
//!
//! A value is taken from the command line if given, then from the config
//! file, then from the built-in default. The seed additionally falls back to
//! `POLARSPHERE_SEED` before the default.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

pub const SEED_ENV: &str = "POLARSPHERE_SEED";
pub const DEFAULT_SEED: u64 = 1;

/// Invalid user input; maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Blank lines and lines starting with `#` are ignored. Keys may use `-`
    /// or `_` interchangeably.
    pub fn parse(text: &str) -> Result<Self, UsageError> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(UsageError(format!(
                    "config line {}: expected key = value",
                    i + 1
                )));
            };
            let key = key.trim().replace('-', "_");
            if key.is_empty() {
                return Err(UsageError(format!("config line {}: empty key", i + 1)));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, UsageError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| UsageError(format!("config key `{key}`: cannot parse `{raw}`"))),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }
}

/// Resolves `flag > config > default`.
pub fn resolve<T: FromStr>(
    flag: Option<T>,
    config: &ConfigFile,
    key: &str,
    default: T,
) -> Result<T, UsageError> {
    if let Some(v) = flag {
        return Ok(v);
    }
    Ok(config.get(key)?.unwrap_or(default))
}

/// Resolves the seed: flag, config, environment, then the default. In CI
/// mode the default is not allowed.
pub fn resolve_seed(
    flag: Option<u64>,
    config: &ConfigFile,
    env: Option<&str>,
    ci: bool,
) -> Result<u64, UsageError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Some(s) = config.get("seed")? {
        return Ok(s);
    }
    if let Some(raw) = env {
        return raw
            .trim()
            .parse()
            .map_err(|_| UsageError(format!("{SEED_ENV}: cannot parse `{raw}`")));
    }
    if ci {
        return Err(UsageError(
            "CI mode needs an explicit seed (--seed, config `seed` or POLARSPHERE_SEED)".into(),
        ));
    }
    Ok(DEFAULT_SEED)
}
