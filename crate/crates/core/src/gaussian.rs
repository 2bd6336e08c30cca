//! Centered Gaussian measures with diagonal covariance, and the seeded
//! normal streams behind every Monte-Carlo estimate.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

const LN_TWO_PI: f64 = 1.837_877_066_409_345_5;

/// Identifies a reproducible random stream. Equal descriptors always yield
/// the same sequence, whatever the platform or thread schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// A different stream under the same seed.
    pub fn substream(self, stream_id: u64) -> Self {
        Self { stream_id, ..self }
    }

    /// Standard normal variates from this stream, starting at `block`.
    /// Blocks are 2^40 words apart, enough for any batch this crate draws.
    pub fn normals(self, block: u64) -> NormalStream {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng.set_word_pos(u128::from(block) << 40);
        NormalStream { rng, spare: None }
    }
}

/// Box–Muller transform over a ChaCha8 stream.
pub struct NormalStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NormalStream {
    /// Uniform on (0, 1].
    fn uniform_open0(&mut self) -> f64 {
        let bits = self.rng.next_u64() >> 11;
        (bits as f64 + 1.0) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform_open0();
        let u2 = self.uniform_open0();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    pub fn fill(&mut self, out: &mut [f64]) {
        for z in out.iter_mut() {
            *z = self.next_normal();
        }
    }
}

/// `N(0, diag(variances))` on `R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianDiag {
    variances: Vec<f64>,
}

impl GaussianDiag {
    pub fn new(variances: Vec<f64>) -> Result<Self> {
        if variances.is_empty() {
            return Err(Error::Domain("Gaussian dimension must be at least 1".into()));
        }
        if let Some(v) = variances.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::Domain(format!("variances must be positive, found {v}")));
        }
        Ok(Self { variances })
    }

    pub fn standard(m: usize) -> Result<Self> {
        Self::new(vec![1.0; m])
    }

    pub fn dim(&self) -> usize {
        self.variances.len()
    }

    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    pub fn log_density(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let mut acc = -0.5 * self.dim() as f64 * LN_TWO_PI;
        for (xi, v) in x.iter().zip(&self.variances) {
            acc -= 0.5 * (v.ln() + xi * xi / v);
        }
        Ok(acc)
    }

    pub fn density(&self, x: &[f64]) -> Result<f64> {
        Ok(self.log_density(x)?.exp())
    }

    /// `n` draws, row-major (`n × m`). Each coordinate is `√v_k · z` with `z`
    /// from the same stream as [`GaussianDiag::standard`], so pushforwards
    /// agree exactly.
    pub fn sample(&self, n: usize, rng: RngStream) -> Vec<f64> {
        let m = self.dim();
        let mut out = vec![0.0; n * m];
        let mut normals = rng.normals(0);
        normals.fill(&mut out);
        let scales: Vec<f64> = self.variances.iter().map(|v| v.sqrt()).collect();
        for row in out.chunks_exact_mut(m) {
            for (x, s) in row.iter_mut().zip(&scales) {
                *x *= s;
            }
        }
        out
    }
}

/// `∫ |⟨h, y⟩| N(0, I_m)(dy)` for a unit vector `h`, which equals `√(2/π)`.
pub fn expected_abs_inner(h: &[f64]) -> Result<f64> {
    let norm = h.iter().map(|x| x * x).sum::<f64>().sqrt();
    if h.is_empty() || (norm - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("expected a unit vector, |h| = {norm}")));
    }
    Ok((2.0 / std::f64::consts::PI).sqrt())
}

/// Standard normal density.
#[inline]
pub fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() * 0.398_942_280_401_432_7
}
