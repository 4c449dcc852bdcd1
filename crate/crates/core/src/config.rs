//! Flat `key = value` configuration files.
//!
//! One pair per line, `#` starts a comment, blank lines are ignored. Keys are
//! case-sensitive and may appear once.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Parse {
                    path: origin.to_path_buf(),
                    row: i + 1,
                    msg: format!("expected `key = value`, found `{line}`"),
                });
            };
            let key = k.trim().to_string();
            if key.is_empty() {
                return Err(Error::Parse {
                    path: origin.to_path_buf(),
                    row: i + 1,
                    msg: "empty key".into(),
                });
            }
            if entries.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(Error::Parse {
                    path: origin.to_path_buf(),
                    row: i + 1,
                    msg: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(Config { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Config::parse(&text, path)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|_| Error::Config {
                key: key.to_string(),
                msg: format!("cannot parse `{v}`"),
            }),
        }
    }

    /// Comma-separated list of values.
    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => parse_list(v).map(Some).map_err(|_| Error::Config {
                key: key.to_string(),
                msg: format!("cannot parse list `{v}`"),
            }),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.insert(key.into(), value.into());
    }

    /// Copy of `self` with every entry of `over` written on top.
    pub fn overlay(&self, over: &Config) -> Config {
        let mut entries = self.entries.clone();
        entries.extend(over.entries.iter().map(|(k, v)| (k.clone(), v.clone())));
        Config { entries }
    }
}

pub fn parse_list<T: FromStr>(v: &str) -> std::result::Result<Vec<T>, T::Err> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_comments() {
        let cfg = Config::parse(
            "# header\ndgp = dgp2\n\nn=100 # trailing\ncoefficients = 0.1, -0.2\n",
            Path::new("t.cfg"),
        )
        .unwrap();
        assert_eq!(cfg.raw("dgp"), Some("dgp2"));
        assert_eq!(cfg.get::<usize>("n").unwrap(), Some(100));
        assert_eq!(cfg.get_list::<f64>("coefficients").unwrap(), Some(vec![0.1, -0.2]));
        assert_eq!(cfg.get::<f64>("missing").unwrap(), None);
    }

    #[test]
    fn overlay_prefers_top() {
        let base = Config::parse("a = 1\nb = 2", Path::new("x")).unwrap();
        let mut top = Config::default();
        top.set("b", "3");
        top.set("c", "4");
        let m = base.overlay(&top);
        assert_eq!(m.raw("a"), Some("1"));
        assert_eq!(m.raw("b"), Some("3"));
        assert_eq!(m.raw("c"), Some("4"));
    }

    #[test]
    fn rejects_duplicates_and_garbage() {
        assert!(Config::parse("a=1\na=2", Path::new("x")).is_err());
        assert!(Config::parse("novalue", Path::new("x")).is_err());
        let cfg = Config::parse("n = abc", Path::new("x")).unwrap();
        assert!(matches!(cfg.get::<usize>("n"), Err(Error::Config { .. })));
    }
}
