//! `key = value` config files and flag/file/env precedence.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 42;
pub const SEED_ENV: &str = "SCIMAP_SEED";

/// Keys a config file may set. Same names as the long flags, with `_`
/// and `-` interchangeable.
const KEYS: &[&str] = &[
    "out",
    "input",
    "format",
    "doc_types",
    "parsed_at",
    "threshold",
    "network",
    "level",
    "counting",
    "min_shared",
    "stoplist",
    "aliases",
    "author_keywords_only",
    "seed",
    "resolution",
    "restarts",
    "max_passes",
    "weighted",
    "normalized",
    "apl_policy",
    "top_k",
    "width",
    "height",
    "iterations",
    "layout_seed",
    "spring_scale",
    "weighted_attraction",
    "formats",
];

#[derive(Debug, Default)]
pub struct FileConfig {
    path: Option<PathBuf>,
    values: BTreeMap<String, (usize, String)>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = crate::io::read_text(path)?;
        let mut cfg = FileConfig::parse(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        cfg.path = Some(path.to_path_buf());
        Ok(cfg)
    }

    fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                return Err(format!("line {}: unknown key `{key}`", i + 1));
            }
            let value = value.trim().to_string();
            if let Some((first, _)) = values.insert(key.clone(), (i + 1, value)) {
                return Err(format!("line {}: `{key}` already set on line {first}", i + 1));
            }
        }
        Ok(FileConfig { path: None, values })
    }

    fn raw(&self, key: &str) -> Option<(usize, &str)> {
        self.values.get(key).map(|(line, v)| (*line, v.as_str()))
    }

    fn bad(&self, key: &str, line: usize, err: impl Display) -> CliError {
        let file = self
            .path
            .as_deref()
            .map_or_else(|| "config".into(), |p| p.display().to_string());
        CliError::input(format!("{file}:{line}: bad value for `{key}`: {err}"))
    }

    /// A flag wins over the file.
    pub fn value<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.raw(key)
            .map(|(line, v)| v.parse().map_err(|e| self.bad(key, line, e)))
            .transpose()
    }

    pub fn choice<T: ValueEnum>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.raw(key)
            .map(|(line, v)| T::from_str(v, true).map_err(|e| self.bad(key, line, e)))
            .transpose()
    }

    /// Comma-separated list; an explicit flag list replaces the file's.
    pub fn list<T: ValueEnum>(&self, flag: Vec<T>, key: &str) -> Result<Option<Vec<T>>, CliError> {
        if !flag.is_empty() {
            return Ok(Some(flag));
        }
        self.raw(key)
            .map(|(line, v)| {
                v.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| T::from_str(s, true).map_err(|e| self.bad(key, line, e)))
                    .collect()
            })
            .transpose()
    }

    pub fn paths(&self, flag: Vec<PathBuf>, key: &str) -> Vec<PathBuf> {
        if !flag.is_empty() {
            return flag;
        }
        self.raw(key)
            .map(|(_, v)| {
                v.split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(PathBuf::from)
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Flag, then file, then `SCIMAP_SEED`, then 42.
    pub fn seed(&self, flag: Option<u64>) -> Result<u64, CliError> {
        if let Some(seed) = self.value(flag, "seed")? {
            return Ok(seed);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|e| CliError::input(format!("{SEED_ENV}={v:?} is not a seed: {e}"))),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_dashes() {
        let cfg = FileConfig::parse("# run settings\nmin-shared = 2\n\n  seed=7  \n").unwrap();
        assert_eq!(cfg.value::<usize>(None, "min_shared").unwrap(), Some(2));
        assert_eq!(cfg.value::<u64>(None, "seed").unwrap(), Some(7));
        assert_eq!(cfg.value(Some(3usize), "min_shared").unwrap(), Some(3));
    }

    #[test]
    fn rejects_unknown_and_repeated_keys() {
        assert!(FileConfig::parse("colour = red").unwrap_err().contains("unknown key"));
        assert!(FileConfig::parse("seed = 1\nseed = 2")
            .unwrap_err()
            .contains("already set on line 1"));
        assert!(FileConfig::parse("seed 1").unwrap_err().contains("line 1"));
    }

    #[test]
    fn bad_values_name_the_line() {
        let cfg = FileConfig::parse("\nthreshold = lots").unwrap();
        let err = cfg.value::<f64>(None, "threshold").unwrap_err();
        assert!(err.to_string().contains(":2: bad value for `threshold`"), "{err}");
    }
}
