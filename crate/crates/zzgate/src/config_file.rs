//! Flat `key = value` config files. `#` starts a comment; blank lines are
//! ignored; keys outside the accepted set are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigFileError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("cannot read config file: {0}")]
    Read(String),
}

pub fn parse(text: &str, allowed: &[&str]) -> Result<BTreeMap<String, String>, ConfigFileError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or(ConfigFileError::Syntax { line })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(ConfigFileError::Syntax { line });
        }
        if !allowed.contains(&key) {
            return Err(ConfigFileError::UnknownKey { line, key: key.to_string() });
        }
        if out.insert(key.to_string(), value.to_string()).is_some() {
            return Err(ConfigFileError::Duplicate { line, key: key.to_string() });
        }
    }
    Ok(out)
}

pub fn load(path: &Path, allowed: &[&str]) -> Result<BTreeMap<String, String>, ConfigFileError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigFileError::Read(format!("{}: {e}", path.display())))?;
    parse(&text, allowed)
}
