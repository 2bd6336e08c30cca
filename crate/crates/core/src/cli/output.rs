//! CSV and plain-text rendering of report tables.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

pub const DIVERGE_HEADER: &str = "m,delta,D_m,sqq_bound,chain_bound,sqrt_harmonic,kernel_scale,time_weighted";
pub const SCALAR_HEADER: &str = "lambda,f_name,m,sup_value,bound,pass";
pub const WITNESS_HEADER: &str = "n,m,delta,value,limit_F0";
pub const P2_HEADER: &str = "m,ratio,std_error,D_m";
pub const VERIFY_HEADER: &str = "check,value,reference,tolerance,pass";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Human,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "human" => Ok(Format::Human),
            other => Err(Error::Parse(format!("unknown format {other:?} (expected csv or human)"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Human => "human",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(u64::from(v))
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn fmt_human(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-3..1e6).contains(&a) {
        format!("{x:.6}")
    } else if x.is_finite() {
        format!("{x:.6e}")
    } else {
        fmt_float(x)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn human(&self) -> String {
        match self {
            Cell::Float(v) => fmt_human(*v),
            other => other.csv(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub echo: Vec<(String, String)>,
    pub header: &'static str,
    pub rows: Vec<Vec<Cell>>,
    pub footer: Vec<String>,
}

impl Report {
    pub fn new(command: &str, echo: Vec<(String, String)>, header: &'static str) -> Self {
        Self {
            command: command.to_string(),
            echo,
            header,
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {} {}\n", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")));
        out.push_str(&format!("# command = {}\n", self.command));
        for (k, v) in &self.echo {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        match format {
            Format::Csv => {
                out.push_str(self.header);
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
            Format::Human => {
                let head: Vec<String> = self.header.split(',').map(str::to_string).collect();
                let body: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|r| r.iter().map(Cell::human).collect())
                    .collect();
                let mut widths: Vec<usize> = head.iter().map(|h| h.chars().count()).collect();
                for r in &body {
                    for (w, c) in widths.iter_mut().zip(r) {
                        *w = (*w).max(c.chars().count());
                    }
                }
                let line = |cells: &[String]| {
                    let padded: Vec<String> = cells
                        .iter()
                        .zip(&widths)
                        .map(|(c, w)| format!("{c:>w$}", w = *w))
                        .collect();
                    padded.join("  ").trim_end().to_string() + "\n"
                };
                out.push_str(&line(&head));
                for r in &body {
                    out.push_str(&line(r));
                }
            }
        }
        for f in &self.footer {
            out.push_str(&format!("# {f}\n"));
        }
        out
    }
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
