use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, Result};

/// `key = value` settings from a config file. Blank lines and lines starting
/// with `#` are ignored; dashes in keys are read as underscores.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|m| CliError::usage(format!("{}: {m}", path.display())))
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key=value", i + 1))?;
            let key = k.trim().replace('-', "_");
            if key.is_empty() {
                return Err(format!("line {}: empty key", i + 1));
            }
            entries.insert(key, v.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Entries under `prefix.`, with the prefix stripped, in key order.
    pub fn prefixed(&self, prefix: &str) -> Vec<(String, String)> {
        let p = format!("{prefix}.");
        self.entries.iter().filter_map(|(k, v)| k.strip_prefix(&p).map(|s| (s.to_string(), v.clone()))).collect()
    }

    /// The flag value if given, else the parsed config entry, else `None`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| CliError::usage(format!("config key {key}: cannot parse {raw:?}: {e}"))),
        }
    }

    pub fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.pick(flag, key)?.ok_or_else(|| {
            CliError::usage(format!("missing --{} (or `{key}` in the config file)", key.replace('_', "-")))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prefers_flags() {
        let c = ConfigFile::parse("# comment\ndatabase = db\ntrain-fraction=0.5\nparam.k = 7\n\n").unwrap();
        assert_eq!(c.get("database"), Some("db"));
        assert_eq!(c.pick::<f64>(None, "train_fraction").unwrap(), Some(0.5));
        assert_eq!(c.pick(Some(0.9), "train_fraction").unwrap(), Some(0.9));
        assert_eq!(c.prefixed("param"), vec![("k".to_string(), "7".to_string())]);
        assert!(c.pick::<f64>(None, "database").is_err());
        assert!(ConfigFile::parse("novalue").is_err());
    }
}
