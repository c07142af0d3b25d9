//! Flat key=value configuration with bracketed section headers, plus the
//! resolved-run record and its hash.
//!
//! Precedence: command-line flag, then the subcommand's section, then the
//! shared `[map]` section, then the built-in default.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;

use num_complex::Complex64;

use crate::CliError;

#[derive(Debug, Default)]
pub struct FileConfig {
    entries: BTreeMap<(String, String), String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if line.starts_with('[') {
                if !line.ends_with(']') {
                    return Err(CliError::Config(format!(
                        "line {}: malformed section header {line:?}",
                        lineno + 1
                    )));
                }
                section = line[1..line.len() - 1].trim().to_string();
                continue;
            }
            match line.split_once('=') {
                Some((k, v)) => {
                    entries.insert(
                        (section.clone(), k.trim().to_string()),
                        v.trim().to_string(),
                    );
                }
                None => {
                    return Err(CliError::Config(format!(
                        "line {}: expected key=value, got {line:?}",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(FileConfig { entries })
    }

    fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.entries
            .get(&(section.to_string(), key.to_string()))
            .or_else(|| self.entries.get(&("map".to_string(), key.to_string())))
            .or_else(|| self.entries.get(&(String::new(), key.to_string())))
            .map(|s| s.as_str())
    }
}

/// Accumulates the fully-resolved configuration of one run; its sorted
/// key=value rendering is hashed into every output file.
pub struct Resolved {
    pub section: String,
    file: FileConfig,
    record: BTreeMap<String, String>,
    results: BTreeMap<String, String>,
}

impl Resolved {
    pub fn new(section: &str, file: FileConfig) -> Self {
        let mut record = BTreeMap::new();
        record.insert("cmd".to_string(), section.to_string());
        Resolved {
            section: section.to_string(),
            file,
            record,
            results: BTreeMap::new(),
        }
    }

    fn note<T: Display>(&mut self, key: &str, value: &T) {
        self.record.insert(key.to_string(), value.to_string());
    }

    pub fn note_str(&mut self, key: &str, value: &str) {
        self.record.insert(key.to_string(), value.to_string());
    }

    /// Record a run outcome; kept out of the config hash.
    pub fn note_result(&mut self, key: &str, value: &str) {
        self.results.insert(key.to_string(), value.to_string());
    }

    /// Sorted key=value lines of the run outcomes.
    pub fn result_lines(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.results {
            out.push_str(k);
            out.push('=');
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    /// Resolve a value with flag-over-file-over-default precedence and
    /// record the outcome.
    pub fn value<T>(&mut self, cli: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T: std::str::FromStr + Display,
        T::Err: Display,
    {
        let v = match cli {
            Some(v) => v,
            None => match self.file.get(&self.section, key) {
                Some(text) => text.parse::<T>().map_err(|e| {
                    CliError::Config(format!("config key {key}={text:?}: {e}"))
                })?,
                None => default,
            },
        };
        self.note(key, &v);
        Ok(v)
    }

    /// Resolve an optional value (no default).
    pub fn optional(&mut self, cli: Option<String>, key: &str) -> Option<String> {
        let v = cli.or_else(|| self.file.get(&self.section, key).map(|s| s.to_string()));
        if let Some(ref s) = v {
            self.note_str(key, s);
        }
        v
    }

    /// Sorted key=value lines of the resolved run.
    pub fn record_lines(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.record {
            out.push_str(k);
            out.push('=');
            out.push_str(v);
            out.push('\n');
        }
        out
    }

    pub fn hash(&self) -> String {
        format!("{:016x}", fnv1a64(self.record_lines().as_bytes()))
    }
}

pub fn fnv1a64(data: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for &b in data {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Parse `re[,im]` into a complex number.
pub fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    let bad = || CliError::Config(format!("expected re[,im], got {text:?}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(re.trim().parse().map_err(|_| bad())?, 0.0)),
        [re, im] => Ok(Complex64::new(
            re.trim().parse().map_err(|_| bad())?,
            im.trim().parse().map_err(|_| bad())?,
        )),
        _ => Err(bad()),
    }
}

/// Parse a list of comma-separated floats.
pub fn parse_floats(text: &str, want: usize) -> Result<Vec<f64>, CliError> {
    let vals: Result<Vec<f64>, _> = text.split(',').map(|p| p.trim().parse::<f64>()).collect();
    let vals =
        vals.map_err(|_| CliError::Config(format!("expected {want} floats, got {text:?}")))?;
    if vals.len() != want {
        return Err(CliError::Config(format!(
            "expected {want} comma-separated floats, got {} in {text:?}",
            vals.len()
        )));
    }
    Ok(vals)
}

/// Parse `t=re[,im]`.
pub fn parse_curve_param(text: &str) -> Result<Complex64, CliError> {
    let rest = text
        .trim()
        .strip_prefix("t=")
        .ok_or_else(|| CliError::Config(format!("expected t=re[,im], got {text:?}")))?;
    parse_complex(rest)
}
