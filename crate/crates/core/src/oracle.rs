//! Brute-force validators: direct Monte Carlo over `R^m`, central finite
//! differences and a grid residual for the elliptic equation.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::RngStream;
use crate::spectrum::Spectrum;
use crate::testfn::Profile;

/// Samples per batch; batch `b` draws from block `b` of the stream.
const BATCH: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    pub mean: f64,
    pub std_error: f64,
    /// Number of function evaluations (twice the pair count when antithetic).
    pub n: usize,
    pub seed: RngStream,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n: usize,
    pub rng: RngStream,
    /// Average each draw `z` with its reflection `−z`.
    pub antithetic: bool,
}

impl McConfig {
    pub fn new(n: usize, rng: RngStream) -> Self {
        Self {
            n,
            rng,
            antithetic: false,
        }
    }

    pub fn antithetic(mut self, on: bool) -> Self {
        self.antithetic = on;
        self
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0.0 {
            return other;
        }
        if other.n == 0.0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * other.n / n,
            m2: self.m2 + other.m2 + d * d * self.n * other.n / n,
        }
    }

    fn std_error(&self) -> f64 {
        if self.n < 2.0 {
            return f64::INFINITY;
        }
        (self.m2 / (self.n - 1.0) / self.n).sqrt()
    }
}

/// Means of `n_out` statistics of standard normal draws in `R^dim`.
///
/// `f(z, out)` writes one observation of every statistic. Batches run in
/// parallel and are merged in batch order, so the result depends only on
/// `cfg`.
pub fn mc_mean_vec<F>(dim: usize, n_out: usize, cfg: &McConfig, f: F) -> Vec<MCEstimate>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    let units = if cfg.antithetic { cfg.n / 2 } else { cfg.n }.max(2);
    let n_batches = units.div_ceil(BATCH);
    let batches: Vec<Vec<Moments>> = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let count = BATCH.min(units - b * BATCH);
            let mut normals = cfg.rng.normals(b as u64);
            let mut z = vec![0.0; dim];
            let mut neg = vec![0.0; dim];
            let mut out = vec![0.0; n_out];
            let mut out2 = vec![0.0; n_out];
            let mut acc = vec![Moments::default(); n_out];
            for _ in 0..count {
                normals.fill(&mut z);
                f(&z, &mut out);
                if cfg.antithetic {
                    for (a, b) in neg.iter_mut().zip(&z) {
                        *a = -b;
                    }
                    f(&neg, &mut out2);
                    for (o, o2) in out.iter_mut().zip(&out2) {
                        *o = 0.5 * (*o + o2);
                    }
                }
                for (a, o) in acc.iter_mut().zip(&out) {
                    a.push(*o);
                }
            }
            acc
        })
        .collect();

    let mut total = vec![Moments::default(); n_out];
    for batch in batches {
        for (t, b) in total.iter_mut().zip(batch) {
            *t = t.merge(b);
        }
    }
    let evals = if cfg.antithetic { 2 * units } else { units };
    total
        .into_iter()
        .map(|m| MCEstimate {
            mean: m.mean,
            std_error: m.std_error(),
            n: evals,
            seed: cfg.rng,
        })
        .collect()
}

/// Mean of `f(Z)`, `Z ~ N(0, I_dim)`.
pub fn mc_mean<F>(dim: usize, cfg: &McConfig, f: F) -> MCEstimate
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    mc_mean_vec(dim, 1, cfg, |z, out| out[0] = f(z))[0]
}

/// `(2π)^{−m/2} ∫ F(⟨c, x⟩) x_k e^{−|x|²/2} dx` by plain (or antithetic)
/// Monte Carlo; `k` is 1-based.
pub fn mc_gaussian_integral_mk(
    profile: &Profile,
    c: &[f64],
    k: usize,
    cfg: &McConfig,
) -> Result<MCEstimate> {
    let m = c.len();
    if m == 0 {
        return Err(Error::Domain("direction must be nonempty".into()));
    }
    if k == 0 || k > m {
        return Err(Error::IndexOutOfRange { index: k, len: m });
    }
    if cfg.n < 1000 {
        return Err(Error::Domain(format!(
            "at least 1000 samples required, got {}",
            cfg.n
        )));
    }
    if profile.is_zero() {
        return Ok(MCEstimate {
            mean: 0.0,
            std_error: 0.0,
            n: cfg.n,
            seed: cfg.rng,
        });
    }
    Ok(mc_mean(m, cfg, |x| {
        let s: f64 = c.iter().zip(x).map(|(a, b)| a * b).sum();
        profile.eval(s) * x[k - 1]
    }))
}

/// Central difference `(g(x + εh) − g(x − εh)) / (2ε)`.
pub fn fd_gradient<G: Fn(&[f64]) -> f64>(g: G, x: &[f64], h: &[f64], eps: f64) -> Result<f64> {
    if x.len() != h.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: h.len(),
        });
    }
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {eps}")));
    }
    let plus: Vec<f64> = x.iter().zip(h).map(|(a, b)| a + eps * b).collect();
    let minus: Vec<f64> = x.iter().zip(h).map(|(a, b)| a - eps * b).collect();
    Ok((g(&plus) - g(&minus)) / (2.0 * eps))
}

/// `max_x |u − ½Σ ∂²_k u + Σ λ_k x_k ∂_k u − f|` over `grid`, with central
/// differences of step `eps`.
pub fn pde_residual<U, F>(u: U, f: F, spectrum: &Spectrum, grid: &[Vec<f64>], eps: f64) -> Result<f64>
where
    U: Fn(&[f64]) -> f64,
    F: Fn(&[f64]) -> f64,
{
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {eps}")));
    }
    let Some(first) = grid.first() else {
        return Ok(0.0);
    };
    let m = first.len();
    if m == 0 || m > 2 {
        return Err(Error::Domain(format!(
            "residual check supports m ∈ {{1, 2}}, got {m}"
        )));
    }
    let lambdas = spectrum.lambdas(m)?;
    let mut worst: f64 = 0.0;
    let mut y = vec![0.0; m];
    for x in grid {
        if x.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: x.len(),
            });
        }
        let u0 = u(x);
        let mut lu = 0.0;
        for k in 0..m {
            y.copy_from_slice(x);
            y[k] = x[k] + eps;
            let up = u(&y);
            y[k] = x[k] - eps;
            let um = u(&y);
            let d2 = (up - 2.0 * u0 + um) / (eps * eps);
            let d1 = (up - um) / (2.0 * eps);
            lu += 0.5 * d2 - lambdas[k] * x[k] * d1;
        }
        worst = worst.max((u0 - lu - f(x)).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::sign_closed_form;

    #[test]
    fn zero_profile_is_exactly_zero() {
        let cfg = McConfig::new(10_000, RngStream::new(1, 0));
        let r = mc_gaussian_integral_mk(&Profile::Constant(0.0), &[1.0, 2.0], 1, &cfg).unwrap();
        assert_eq!(r.mean, 0.0);
    }

    #[test]
    fn sign_profile_closed_form() {
        let c = [2.0, 1.0, 2.0];
        let want = (2.0 / std::f64::consts::PI).sqrt() * 2.0 / 3.0;
        assert!((sign_closed_form(&c, 1).unwrap() - want).abs() < 1e-15);
        let cfg = McConfig::new(1_000_000, RngStream::new(42, 1));
        let r = mc_gaussian_integral_mk(&Profile::Sign, &c, 1, &cfg).unwrap();
        assert!((r.mean - want).abs() < 3.0 * r.std_error, "{r:?}");
        assert_eq!(r.n, 1_000_000);
    }

    #[test]
    fn determinism() {
        let cfg = McConfig::new(50_000, RngStream::new(9, 4)).antithetic(true);
        let a = mc_gaussian_integral_mk(&Profile::Tanh, &[1.0, -0.5], 2, &cfg).unwrap();
        let b = mc_gaussian_integral_mk(&Profile::Tanh, &[1.0, -0.5], 2, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn argument_checks() {
        let cfg = McConfig::new(100, RngStream::new(1, 0));
        assert!(mc_gaussian_integral_mk(&Profile::Sign, &[1.0], 1, &cfg).is_err());
        let cfg = McConfig::new(1000, RngStream::new(1, 0));
        assert!(mc_gaussian_integral_mk(&Profile::Sign, &[1.0], 2, &cfg).is_err());
    }

    #[test]
    fn finite_differences() {
        let lin = |x: &[f64]| 3.0 * x[0] - 2.0 * x[1];
        for eps in [1e-1, 1e-3, 0.7] {
            let d = fd_gradient(lin, &[0.3, 4.0], &[1.0, 1.0], eps).unwrap();
            assert!((d - 1.0).abs() < 1e-12);
        }
        let d = fd_gradient(|x| x[0].sin(), &[0.0], &[1.0], 1e-4).unwrap();
        assert!((d - 1.0).abs() < 1e-8);
        assert!(fd_gradient(lin, &[0.0, 0.0], &[1.0], 1e-3).is_err());
    }

    #[test]
    fn residual_of_exact_solutions() {
        let s = Spectrum::quadratic(1.0).unwrap();
        let grid: Vec<Vec<f64>> = (-20..=20).map(|i| vec![i as f64 * 0.1]).collect();
        let zero = pde_residual(|_| 0.0, |_| 0.0, &s, &grid, 1e-3).unwrap();
        assert_eq!(zero, 0.0);
        // u = x/2 solves u − ½u'' + x u' = x
        let r = pde_residual(|x| 0.5 * x[0], |x| x[0], &s, &grid, 1e-3).unwrap();
        assert!(r <= 1e-8, "{r}");
        let grid3 = vec![vec![0.0; 3]];
        assert!(pde_residual(|_| 0.0, |_| 0.0, &s, &grid3, 1e-3).is_err());
    }

    #[test]
    fn unbiasedness_over_repetitions() {
        // 50 seeds on a fixed instance; the mean of means must sit within
        // 3 pooled standard errors of the closed form.
        let c = [1.0, -2.0, 0.5];
        let want = sign_closed_form(&c, 2).unwrap();
        let reps: Vec<MCEstimate> = (0..50)
            .map(|s| {
                let cfg = McConfig::new(20_000, RngStream::new(1000 + s, 0));
                mc_gaussian_integral_mk(&Profile::Sign, &c, 2, &cfg).unwrap()
            })
            .collect();
        let mean = reps.iter().map(|r| r.mean).sum::<f64>() / 50.0;
        let pooled = (reps.iter().map(|r| r.std_error.powi(2)).sum::<f64>()).sqrt() / 50.0;
        assert!((mean - want).abs() < 3.0 * pooled, "{mean} vs {want} ± {pooled}");
    }
}
