// Copyright 2026 The nwqed Authors
// SPDX-License-Identifier: Apache-2.0

//! `key = value` run configuration with per-command schemas.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Float,
    FloatList,
    Count,
    CountList,
    /// One of a fixed set of words.
    Choice(&'static [&'static str]),
    /// A float or the given word.
    FloatOr(&'static str),
}

/// A documented configuration key with its default.
#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    pub default: &'static str,
    pub doc: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Floats(Vec<f64>),
    Count(u64),
    Counts(Vec<u64>),
    Word(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |items: Vec<String>| items.join(", ");
        match self {
            Value::Float(x) => write!(f, "{x}"),
            Value::Floats(xs) => write!(f, "{}", join(xs.iter().map(|x| x.to_string()).collect())),
            Value::Count(n) => write!(f, "{n}"),
            Value::Counts(ns) => write!(f, "{}", join(ns.iter().map(|n| n.to_string()).collect())),
            Value::Word(w) => write!(f, "{w}"),
        }
    }
}

/// Raw entries before validation against a schema.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut raw = RawConfig::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    n + 1
                ))
            })?;
            raw.insert(key.trim(), value.trim()).map_err(|e| match e {
                CliError::Config(msg) => CliError::Config(format!("line {}: {msg}", n + 1)),
                other => other,
            })?;
        }
        Ok(raw)
    }

    fn insert(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if key.is_empty() {
            return Err(CliError::Config("empty key".into()));
        }
        if self
            .entries
            .insert(key.to_string(), value.to_string())
            .is_some()
        {
            return Err(CliError::Config(format!("duplicate key `{key}`")));
        }
        Ok(())
    }

    /// Applies a `KEY=VALUE` override, replacing any value from the file.
    pub fn set(&mut self, assignment: &str) -> Result<(), CliError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("override `{assignment}` is not KEY=VALUE")))?;
        self.entries
            .insert(key.trim().to_string(), value.trim().to_string());
        Ok(())
    }

    /// Validates against `schema`, filling defaults. Unknown keys are errors.
    pub fn resolve(&self, schema: &[Key]) -> Result<RunConfig, CliError> {
        if let Some(unknown) = self
            .entries
            .keys()
            .find(|k| !schema.iter().any(|s| s.name == k.as_str()))
        {
            let known: Vec<_> = schema.iter().map(|k| k.name).collect();
            return Err(CliError::Config(format!(
                "unknown key `{unknown}` (expected one of: {})",
                known.join(", ")
            )));
        }
        let mut values = BTreeMap::new();
        for key in schema {
            let text = self
                .entries
                .get(key.name)
                .map(String::as_str)
                .unwrap_or(key.default);
            let value = parse_value(key, text)?;
            values.insert(key.name, value);
        }
        Ok(RunConfig { values })
    }
}

fn parse_float(key: &str, text: &str) -> Result<f64, CliError> {
    let x: f64 = text
        .parse()
        .map_err(|_| CliError::Config(format!("`{key}`: `{text}` is not a number")))?;
    if !x.is_finite() {
        return Err(CliError::Config(format!("`{key}`: value must be finite")));
    }
    Ok(x)
}

fn parse_count(key: &str, text: &str) -> Result<u64, CliError> {
    text.parse()
        .map_err(|_| CliError::Config(format!("`{key}`: `{text}` is not a non-negative integer")))
}

fn list<'a>(key: &str, text: &'a str) -> Result<Vec<&'a str>, CliError> {
    let items: Vec<_> = text.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(CliError::Config(format!(
            "`{key}`: empty list entry in `{text}`"
        )));
    }
    Ok(items)
}

fn parse_value(key: &Key, text: &str) -> Result<Value, CliError> {
    let name = key.name;
    Ok(match key.kind {
        Kind::Float => Value::Float(parse_float(name, text)?),
        Kind::FloatList => Value::Floats(
            list(name, text)?
                .into_iter()
                .map(|s| parse_float(name, s))
                .collect::<Result<_, _>>()?,
        ),
        Kind::Count => Value::Count(parse_count(name, text)?),
        Kind::CountList => Value::Counts(
            list(name, text)?
                .into_iter()
                .map(|s| parse_count(name, s))
                .collect::<Result<_, _>>()?,
        ),
        Kind::Choice(words) => {
            if !words.contains(&text) {
                return Err(CliError::Config(format!(
                    "`{name}`: expected one of {}, got `{text}`",
                    words.join("|")
                )));
            }
            Value::Word(text.to_string())
        }
        Kind::FloatOr(word) => {
            if text == word {
                Value::Word(text.to_string())
            } else {
                Value::Float(parse_float(name, text)?)
            }
        }
    })
}

/// Validated configuration with every key of the schema present.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<&'static str, Value>,
}

impl RunConfig {
    /// Sorted `(key, value)` pairs for the dataset header.
    pub fn echo(&self) -> Vec<(String, String)> {
        self.values
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    fn get(&self, key: &str) -> &Value {
        self.values
            .get(key)
            .unwrap_or_else(|| panic!("key `{key}` missing from schema"))
    }

    pub fn float(&self, key: &str) -> f64 {
        match self.get(key) {
            Value::Float(x) => *x,
            other => panic!("`{key}` is not a float: {other:?}"),
        }
    }

    /// `None` when the key holds its keyword alternative.
    pub fn float_or_word(&self, key: &str) -> Option<f64> {
        match self.get(key) {
            Value::Float(x) => Some(*x),
            _ => None,
        }
    }

    pub fn floats(&self, key: &str) -> &[f64] {
        match self.get(key) {
            Value::Floats(xs) => xs,
            other => panic!("`{key}` is not a float list: {other:?}"),
        }
    }

    pub fn count(&self, key: &str) -> u64 {
        match self.get(key) {
            Value::Count(n) => *n,
            other => panic!("`{key}` is not a count: {other:?}"),
        }
    }

    pub fn counts(&self, key: &str) -> &[u64] {
        match self.get(key) {
            Value::Counts(ns) => ns,
            other => panic!("`{key}` is not a count list: {other:?}"),
        }
    }

    pub fn word(&self, key: &str) -> &str {
        match self.get(key) {
            Value::Word(w) => w,
            other => panic!("`{key}` is not a word: {other:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCHEMA: &[Key] = &[
        Key {
            name: "purcell",
            kind: Kind::Float,
            default: "20",
            doc: "",
        },
        Key {
            name: "n_modes",
            kind: Kind::CountList,
            default: "1, 2",
            doc: "",
        },
        Key {
            name: "branch",
            kind: Kind::Choice(&["transmitted", "reflected"]),
            default: "transmitted",
            doc: "",
        },
        Key {
            name: "window",
            kind: Kind::FloatOr("auto"),
            default: "auto",
            doc: "",
        },
    ];

    #[test]
    fn defaults_and_overrides() {
        let mut raw =
            RawConfig::parse("# comment\npurcell = 2.5  # trailing\n\nbranch=reflected\n").unwrap();
        raw.set("n_modes=3,4").unwrap();
        let cfg = raw.resolve(SCHEMA).unwrap();
        assert_eq!(cfg.float("purcell"), 2.5);
        assert_eq!(cfg.counts("n_modes"), &[3, 4]);
        assert_eq!(cfg.word("branch"), "reflected");
        assert_eq!(cfg.float_or_word("window"), None);
        assert_eq!(cfg.echo()[1], ("n_modes".to_string(), "3, 4".to_string()));
    }

    #[test]
    fn malformed_inputs() {
        assert!(RawConfig::parse("purcell 20").is_err());
        assert!(RawConfig::parse("a = 1\na = 2").is_err());
        assert!(RawConfig::parse("= 2").is_err());
        let bad = |text: &str| RawConfig::parse(text).unwrap().resolve(SCHEMA).is_err();
        assert!(bad("unknown = 1"));
        assert!(bad("purcell = twenty"));
        assert!(bad("purcell = inf"));
        assert!(bad("n_modes = 1,,2"));
        assert!(bad("n_modes = -3"));
        assert!(bad("branch = sideways"));
        assert!(bad("window = wide"));
    }
}
