//! Optional `key = value` configuration file. Keys are long flag names
//! without the leading dashes, e.g. `mu-eta = 2.1`; `#` starts a comment
//! line. A flag given on the command line always wins.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use wcs_qrng::{Error, Result};

const KNOWN_KEYS: &[&str] = &[
    "alpha",
    "ascii",
    "bits",
    "block-size",
    "debias",
    "eta0",
    "eta1",
    "format",
    "gate-rate",
    "gates",
    "max",
    "min",
    "mu",
    "mu-eta",
    "points",
    "seed",
    "source",
    "spacing",
    "tail-mass",
];

#[derive(Debug, Default)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) if !p.as_os_str().is_empty() => Self::parse(&std::fs::read_to_string(p)?),
            _ => Ok(Self::default()),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("config line {}: expected key=value", i + 1))
            })?;
            let key = k.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(Error::InvalidParameter(format!(
                    "config line {}: unknown key '{key}'",
                    i + 1
                )));
            }
            if entries
                .insert(key.to_string(), v.trim().to_string())
                .is_some()
            {
                return Err(Error::InvalidParameter(format!(
                    "config line {}: duplicate key '{key}'",
                    i + 1
                )));
            }
        }
        Ok(Self { entries })
    }

    /// Value from the file alone.
    pub fn value<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.entries
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Error::InvalidParameter(format!("config key '{key}': {e}")))
            })
            .transpose()
    }

    /// The flag if given, else the file value.
    pub fn pick<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.value(key),
        }
    }

    pub fn pick_or<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.pick(flag, key)?.unwrap_or(default))
    }

    /// A comma-separated list; a non-empty flag list wins.
    pub fn pick_list<T>(&self, flag: Vec<T>, key: &str) -> Result<Vec<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        if !flag.is_empty() {
            return Ok(flag);
        }
        match self.entries.get(key) {
            None => Ok(Vec::new()),
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<T>()
                        .map_err(|e| Error::InvalidParameter(format!("config key '{key}': {e}")))
                })
                .collect(),
        }
    }

    /// A switch that is on if set on the command line or true in the file.
    pub fn switch(&self, flag: bool, key: &str) -> Result<bool> {
        if flag {
            return Ok(true);
        }
        match self.entries.get(key).map(String::as_str) {
            None | Some("false" | "0" | "no") => Ok(false),
            Some("true" | "1" | "yes") => Ok(true),
            Some(other) => Err(Error::InvalidParameter(format!(
                "config key '{key}': expected true or false, got '{other}'"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_layers() {
        let c = Config::parse("# comment\nseed = 7\n\nsource=single,indist\ndebias=yes\n").unwrap();
        assert_eq!(c.pick::<u64>(None, "seed").unwrap(), Some(7));
        assert_eq!(c.pick(Some(9u64), "seed").unwrap(), Some(9));
        assert_eq!(c.pick_or::<f64>(None, "mu", 1.5).unwrap(), 1.5);
        assert_eq!(
            c.pick_list::<String>(vec![], "source").unwrap(),
            ["single", "indist"]
        );
        assert!(c.switch(false, "debias").unwrap());
        assert!(!c.switch(false, "ascii").unwrap());
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(Config::parse("seed 7").is_err());
        assert!(Config::parse("colour=blue").is_err());
        assert!(Config::parse("seed=1\nseed=2").is_err());
        let c = Config::parse("seed=abc\ndebias=maybe").unwrap();
        assert!(c.pick::<u64>(None, "seed").is_err());
        assert!(c.switch(false, "debias").is_err());
    }
}
