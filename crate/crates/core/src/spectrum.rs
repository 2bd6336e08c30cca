//! Eigenvalue sequences `λ_k` of the diagonal drift and the derived
//! covariance scalars `c_k(t)`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::specfun::{one_minus_exp, one_minus_exp_ratio};

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumKind {
    /// `λ_k = c0 · k²`
    Quadratic { c0: f64 },
    /// A finite ascending list, optionally certified to dominate `c0 · k²`.
    Explicit {
        values: Vec<f64>,
        certified_c0: Option<f64>,
    },
    /// `λ_k = λ` for every `k`.
    Constant { lambda: f64 },
}

/// Immutable, validated spectrum. The drift matrix is `diag(−λ_1, …, −λ_m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    kind: SpectrumKind,
}

impl Spectrum {
    pub fn quadratic(c0: f64) -> Result<Self> {
        if !(c0 > 0.0 && c0.is_finite()) {
            return Err(Error::InvalidSpectrum(format!("c0 must be positive, got {c0}")));
        }
        Ok(Self {
            kind: SpectrumKind::Quadratic { c0 },
        })
    }

    pub fn constant(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidSpectrum(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        Ok(Self {
            kind: SpectrumKind::Constant { lambda },
        })
    }

    /// Validates strict monotonicity, positivity and, when given, the
    /// certificate `λ_k ≥ c0 · k²` for every listed `k`.
    pub fn explicit(values: Vec<f64>, certified_c0: Option<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSpectrum("empty eigenvalue list".into()));
        }
        if let Some(bad) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidSpectrum(format!(
                "eigenvalues must be positive and finite, found {bad}"
            )));
        }
        if let Some(i) = values.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSpectrum(format!(
                "eigenvalues must be strictly increasing: λ_{} = {} ≥ λ_{} = {}",
                i + 1,
                values[i],
                i + 2,
                values[i + 1]
            )));
        }
        if let Some(c0) = certified_c0 {
            if !(c0 > 0.0 && c0.is_finite()) {
                return Err(Error::InvalidSpectrum(format!(
                    "certified c0 must be positive, got {c0}"
                )));
            }
            for (i, v) in values.iter().enumerate() {
                let k = (i + 1) as f64;
                if *v < c0 * k * k {
                    return Err(Error::InvalidSpectrum(format!(
                        "certificate violated: λ_{} = {v} < {c0}·{}²",
                        i + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(Self {
            kind: SpectrumKind::Explicit {
                values,
                certified_c0,
            },
        })
    }

    /// Reads one positive real per line; blank lines and `#` comments are skipped.
    pub fn from_file(path: &Path, certified_c0: Option<f64>) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: f64 = line.parse().map_err(|_| {
                Error::Parse(format!("{}:{}: not a number: {line:?}", path.display(), lineno + 1))
            })?;
            values.push(v);
        }
        Self::explicit(values, certified_c0)
    }

    pub fn kind(&self) -> &SpectrumKind {
        &self.kind
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, SpectrumKind::Constant { .. })
    }

    /// Largest admissible dimension, if bounded.
    pub fn max_dim(&self) -> Option<usize> {
        match &self.kind {
            SpectrumKind::Explicit { values, .. } => Some(values.len()),
            _ => None,
        }
    }

    /// A constant `c0` with `λ_k ≥ c0 · k²` for all `k`, when one is known.
    pub fn certified_c0(&self) -> Option<f64> {
        match &self.kind {
            SpectrumKind::Quadratic { c0 } => Some(*c0),
            SpectrumKind::Explicit { certified_c0, .. } => *certified_c0,
            SpectrumKind::Constant { .. } => None,
        }
    }

    pub fn lambda(&self, k: usize) -> Result<f64> {
        match &self.kind {
            _ if k == 0 => Err(Error::IndexOutOfRange {
                index: 0,
                len: self.max_dim().unwrap_or(usize::MAX),
            }),
            SpectrumKind::Quadratic { c0 } => {
                let k = k as f64;
                Ok(c0 * k * k)
            }
            SpectrumKind::Constant { lambda } => Ok(*lambda),
            SpectrumKind::Explicit { values, .. } => {
                values.get(k - 1).copied().ok_or(Error::IndexOutOfRange {
                    index: k,
                    len: values.len(),
                })
            }
        }
    }

    /// `λ_1, …, λ_m`.
    pub fn lambdas(&self, m: usize) -> Result<Vec<f64>> {
        self.check_dim(m)?;
        (1..=m).map(|k| self.lambda(k)).collect()
    }

    pub(crate) fn check_dim(&self, m: usize) -> Result<()> {
        if m == 0 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        if let Some(len) = self.max_dim() {
            if m > len {
                return Err(Error::IndexOutOfRange { index: m, len });
            }
        }
        Ok(())
    }

    pub fn require_increasing(&self, what: &str) -> Result<()> {
        if self.is_constant() {
            return Err(Error::UnsupportedSpectrum(format!(
                "{what} needs a strictly increasing spectrum; a constant spectrum \
                 is covered by the scalar dimension-free bound (use scalar-bound)"
            )));
        }
        Ok(())
    }

    pub fn cov_scalars(&self, m: usize, t: f64) -> Result<CovScalars> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("time must be nonnegative, got {t}")));
        }
        let lambdas = self.lambdas(m)?;
        Ok(CovScalars::from_lambdas(&lambdas, t))
    }

    /// `Σ_{k≤m} λ_k^{−1/2}`.
    pub fn sqrt_harmonic_sum(&self, m: usize) -> Result<f64> {
        self.require_increasing("sqrt_harmonic_sum")?;
        Ok(self.lambdas(m)?.iter().map(|l| 1.0 / l.sqrt()).sum())
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SpectrumKind::Quadratic { c0 } => write!(f, "quadratic:c0={c0}"),
            SpectrumKind::Constant { lambda } => write!(f, "constant:lambda={lambda}"),
            SpectrumKind::Explicit {
                values,
                certified_c0,
            } => {
                write!(f, "explicit:n={}", values.len())?;
                if let Some(c0) = certified_c0 {
                    write!(f, ",c0={c0}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `quadratic:c0=1`, `constant:lambda=2.5` or
/// `explicit:file=<path>[,c0=<certified>]`.
impl FromStr for Spectrum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut params = std::collections::BTreeMap::new();
        for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| {
                Error::Parse(format!("spectrum parameter {part:?} is not key=value"))
            })?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
        let num = |key: &str| -> Result<Option<f64>> {
            params
                .get(key)
                .map(|v| {
                    v.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("spectrum {key}={v:?} is not a number")))
                })
                .transpose()
        };
        let allow = |keys: &[&str]| -> Result<()> {
            match params.keys().find(|k| !keys.contains(&k.as_str())) {
                Some(k) => Err(Error::Parse(format!(
                    "unknown spectrum parameter {k:?} for kind {kind:?}"
                ))),
                None => Ok(()),
            }
        };
        match kind {
            "quadratic" => {
                allow(&["c0"])?;
                Spectrum::quadratic(num("c0")?.unwrap_or(1.0))
            }
            "constant" => {
                allow(&["lambda"])?;
                let lambda = num("lambda")?
                    .ok_or_else(|| Error::Parse("constant spectrum needs lambda=<value>".into()))?;
                Spectrum::constant(lambda)
            }
            "explicit" => {
                allow(&["file", "c0"])?;
                let file = params
                    .get("file")
                    .ok_or_else(|| Error::Parse("explicit spectrum needs file=<path>".into()))?;
                Spectrum::from_file(Path::new(file), num("c0")?)
            }
            other => Err(Error::Parse(format!(
                "unknown spectrum kind {other:?} (expected quadratic, constant or explicit)"
            ))),
        }
    }
}

/// `c_k(t) = ((1 − e^{−2λ_k t}) / (2λ_k))^{1/2}` and `|c(t)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovScalars {
    pub t: f64,
    pub c: Vec<f64>,
    pub norm: f64,
}

impl CovScalars {
    pub fn from_lambdas(lambdas: &[f64], t: f64) -> Self {
        let c: Vec<f64> = lambdas.iter().map(|&l| cov_scalar(l, t)).collect();
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        Self { t, c, norm }
    }
}

/// `c(t)` for a single eigenvalue.
#[inline]
pub fn cov_scalar(lambda: f64, t: f64) -> f64 {
    (one_minus_exp(2.0 * lambda * t) / (2.0 * lambda)).sqrt()
}

/// `c(t)² / t`, finite and equal to 1 at `t = 0`.
#[inline]
pub fn cov_scalar_sq_over_t(lambda: f64, t: f64) -> f64 {
    one_minus_exp_ratio(2.0 * lambda * t)
}

/// `√(π / (2 c0 s))`, an upper bound for `Σ_k e^{−2 c0 k² s}`.
pub fn tail_sum_bound(c0: f64, s: f64) -> f64 {
    (std::f64::consts::PI / (2.0 * c0 * s)).sqrt()
}

/// `(2π t / c0)^{1/4}`, an upper bound for `|c(t)|` when `λ_k ≥ c0 k²`.
pub fn c_norm_upper(c0: f64, t: f64) -> f64 {
    (2.0 * std::f64::consts::PI * t / c0).powf(0.25)
}
