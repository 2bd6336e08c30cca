//! `key = value` configuration files and the flag/file/default resolver.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const KNOWN_KEYS: &[&str] = &[
    "seed",
    "out",
    "format",
    "rel_tol",
    "abs_tol",
    "level",
    "spectrum",
    "delta",
    "m",
    "kernel_scale",
    "time_weighted",
    "lambda",
    "f",
    "grid",
    "n",
    "profile",
    "samples",
];

/// Parses `key = value` lines; `#` starts a comment, blank lines are
/// skipped, dashes in keys are read as underscores.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::Parse(format!("config line {}: expected key = value, got {raw:?}", i + 1))
        })?;
        let key = k.trim().replace('-', "_");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::Parse(format!(
                "config line {}: unknown key {key:?} (known: {})",
                i + 1,
                KNOWN_KEYS.join(", ")
            )));
        }
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(Error::Parse(format!("config line {}: duplicate key {key:?}", i + 1)));
        }
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Resolves each parameter as flag, then file, then default, and records
/// the outcome for the output header.
#[derive(Debug, Default)]
pub struct Resolver {
    file: BTreeMap<String, String>,
    pub echo: Vec<(String, String)>,
}

impl Resolver {
    pub fn new(file: BTreeMap<String, String>) -> Self {
        Self {
            file,
            echo: Vec::new(),
        }
    }

    pub fn get<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let value = match flag {
            Some(v) => v,
            None => match self.file.get(key) {
                Some(s) => s
                    .parse::<T>()
                    .map_err(|e| Error::Parse(format!("config key {key}: {e}")))?,
                None => default,
            },
        };
        self.echo.push((key.to_string(), value.to_string()));
        Ok(value)
    }

    /// Raw access for keys without a sensible default.
    pub fn get_opt<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let value = match flag {
            Some(v) => Some(v),
            None => self
                .file
                .get(key)
                .map(|s| s.parse::<T>().map_err(|e| Error::Parse(format!("config key {key}: {e}"))))
                .transpose()?,
        };
        if let Some(v) = &value {
            self.echo.push((key.to_string(), v.to_string()));
        }
        Ok(value)
    }
}

/// Comma-separated list; the empty string is the empty list.
#[derive(Debug, Clone, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: Display,
{
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(List(Vec::new()));
        }
        split_items(s)
            .into_iter()
            .map(|p| p.trim().parse::<T>().map_err(|e| format!("bad list item {p:?}: {e}")))
            .collect::<std::result::Result<Vec<T>, String>>()
            .map(List)
    }
}

impl<T: Display> Display for List<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Splits on commas, re-attaching `key=value` continuations of
/// parameterized items such as `explicit:file=a.txt,c0=1`.
fn split_items(s: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for piece in s.split(',') {
        match out.last_mut() {
            Some(prev) if piece.contains('=') && !piece.contains(':') && prev.contains(':') => {
                prev.push(',');
                prev.push_str(piece);
            }
            _ => out.push(piece.to_string()),
        }
    }
    out
}

/// `lo:hi:n`, `n ≥ 1` evenly spaced points.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        (0..self.n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64)
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts.as_slice() else {
            return Err(format!("grid {s:?} is not lo:hi:n"));
        };
        let lo: f64 = lo.trim().parse().map_err(|_| format!("bad grid start in {s:?}"))?;
        let hi: f64 = hi.trim().parse().map_err(|_| format!("bad grid end in {s:?}"))?;
        let n: usize = n.trim().parse().map_err(|_| format!("bad grid count in {s:?}"))?;
        if n == 0 || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(format!("grid {s:?} needs n >= 1 and lo <= hi"));
        }
        Ok(Grid { lo, hi, n })
    }
}

impl Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.n)
    }
}
