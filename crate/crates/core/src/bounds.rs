//! The logarithmically divergent lower bound `D_m`, its analytic minorants,
//! witnesses for the extremal functional, the scalar dimension-free
//! harness and the `L²` contrast.
//!
//! With `λ_k` increasing and `δ > 0`,
//! `D_m = (2/π) Σ_k (∫₀^δ λ_k e^{−λ_k t}(1 − e^{−2λ_k t})^{−1/2} c_k(t)/|c(t)| dt)²`,
//! where `c_k(t)/(1 − e^{−2λ_k t})^{1/2} = (2λ_k)^{−1/2}` reduces the
//! integrand to `√(λ_k/2) e^{−λ_k t} / |c(t)|`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{GaussianDiag, RngStream};
use crate::ousolver::{grad_resolvent_cylindrical, scalar_grad_sup, KernelScale, OUModel};
use crate::reduction::unit_integral;
use crate::specfun::{geometric_breaks, integrate, integrate_shared, one_minus_exp_ratio, QuadratureSpec};
use crate::spectrum::Spectrum;
use crate::testfn::{CylindricalFn, Profile};

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceRow {
    pub m: usize,
    pub delta: f64,
    pub d_m: f64,
    /// Bound after replacing `|c(t)|` by `(2πt/c0)^{1/4}`.
    pub sqq_bound: f64,
    /// Bound after replacing `λ_k δ` by `c0 δ` in the incomplete gamma.
    pub chain_bound: f64,
    pub sqrt_harmonic: f64,
    pub kernel_scale: KernelScale,
    pub time_weighted: bool,
    /// Quadrature error estimate for `d_m`.
    pub error: f64,
    pub converged: bool,
}

impl DivergenceRow {
    /// `D_m ≥ sqq ≥ chain ≥ 0` up to `slack`.
    pub fn chain_holds(&self, slack: f64) -> bool {
        self.d_m >= self.sqq_bound - slack
            && self.sqq_bound >= self.chain_bound - slack
            && self.chain_bound >= -slack
    }
}

/// `|c(t)|/√t`, finite at `t = 0` where it equals `√m`.
fn c_norm_over_sqrt_t(lambdas: &[f64], t: f64) -> f64 {
    lambdas
        .iter()
        .map(|l| one_minus_exp_ratio(2.0 * l * t))
        .sum::<f64>()
        .sqrt()
}

fn check_inputs(spectrum: &Spectrum, m: usize, delta: f64) -> Result<Vec<f64>> {
    spectrum.require_increasing("the divergence bound")?;
    if m < 2 {
        return Err(Error::Domain(format!(
            "the divergence bound is defined for m >= 2, got m = {m}"
        )));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Domain(format!("delta must be positive and finite, got {delta}")));
    }
    spectrum.lambdas(m)
}

/// `λ_k e^{−λ_k t} (1 − e^{−2λ_k t})^{−1/2} c_k(t) / |c(t)|`.
pub fn divergence_integrand(spectrum: &Spectrum, m: usize, k: usize, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    if k == 0 || k > m {
        return Err(Error::IndexOutOfRange { index: k, len: m });
    }
    let lambdas = spectrum.lambdas(m)?;
    let l = lambdas[k - 1];
    Ok((0.5 * l).sqrt() * (-l * t).exp() / (t.sqrt() * c_norm_over_sqrt_t(&lambdas, t)))
}

/// `∫₀^δ w(t) √(λ_k/2) e^{−λ_k t} q(|c(t)|) / |c(t)| dt` for every `k`, with
/// `w(t) = e^{−t}` when `time_weighted`. In `t = s²` the integrand becomes
/// `√(2λ_k) e^{−λ_k s²} q(|c|) / (|c|/s)`; the shared factor is evaluated
/// once per node for all `k`.
fn weighted_time_integrals<Q>(
    lambdas: &[f64],
    delta: f64,
    time_weighted: bool,
    q: Q,
    spec: &QuadratureSpec,
) -> Result<(Vec<f64>, Vec<f64>, bool)>
where
    Q: Fn(f64) -> Result<f64> + Sync,
{
    let top = delta.sqrt();
    let lmax = lambdas.iter().copied().fold(0.0, f64::max);
    let breaks = geometric_breaks((1e-3 / lmax.sqrt()).min(1e-5 * top), top, 2.0);
    let failure = std::sync::Mutex::new(None);
    let r = integrate_shared(
        |s: f64| {
            let t = s * s;
            let ratio = c_norm_over_sqrt_t(lambdas, t);
            let weight = if time_weighted { (-t).exp() } else { 1.0 };
            match q(s * ratio) {
                Ok(v) => (t, weight * v / ratio),
                Err(e) => {
                    failure.lock().expect("poisoned").get_or_insert(e);
                    (t, 0.0)
                }
            }
        },
        |k, _s, (t, shared): &(f64, f64)| {
            let l = lambdas[k];
            (2.0 * l).sqrt() * (-l * t).exp() * shared
        },
        lambdas.len(),
        0.0,
        top,
        &breaks,
        spec,
    );
    if let Some(e) = failure.into_inner().expect("poisoned") {
        return Err(e);
    }
    Ok((r.values, r.errors, r.converged))
}

/// `γ(3/4, x) = ∫₀^x s^{−1/4} e^{−s} ds`.
pub fn lower_gamma_three_quarters(x: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("x must be nonnegative, got {x}")));
    }
    let f = |s: f64| s.powf(-0.25) * (-s).exp();
    let head = integrate(f, 0.0, x.min(60.0), &spec.clone().singular_lower(-0.25))?;
    let tail = if x > 60.0 {
        integrate(f, 60.0, x.min(800.0), &spec.regular())?.value
    } else {
        0.0
    };
    Ok(head.value + tail)
}

fn certified(spectrum: &Spectrum) -> Result<f64> {
    spectrum.certified_c0().ok_or_else(|| {
        Error::UnsupportedSpectrum(
            "the analytic bounds need a certified c0 with λ_k >= c0·k² (give c0=<value>)".into(),
        )
    })
}

/// Multiplier for kernel scale and time weighting on the analytic bounds.
fn bound_factor(scale: KernelScale, delta: f64, time_weighted: bool) -> f64 {
    let f = scale.factor().powi(2);
    if time_weighted {
        f * (-2.0 * delta).exp()
    } else {
        f
    }
}

/// `(1/π) √(c0/2π) Σ_k λ_k^{−1/2} γ(3/4, λ_k δ)²`.
pub fn sqq_bound(spectrum: &Spectrum, m: usize, delta: f64, spec: &QuadratureSpec) -> Result<f64> {
    let lambdas = check_inputs(spectrum, m, delta)?;
    let c0 = certified(spectrum)?;
    let sum = lambdas
        .iter()
        .map(|&l| Ok(lower_gamma_three_quarters(l * delta, spec)?.powi(2) / l.sqrt()))
        .collect::<Result<Vec<f64>>>()?
        .iter()
        .sum::<f64>();
    Ok((c0 / (2.0 * PI)).sqrt() / PI * sum)
}

/// `(1/π) √(c0/2π) γ(3/4, c0 δ)² Σ_k λ_k^{−1/2}`. `c0` may not exceed the
/// spectrum's certificate.
pub fn chain_bound(c0: f64, delta: f64, spectrum: &Spectrum, m: usize, spec: &QuadratureSpec) -> Result<f64> {
    let lambdas = check_inputs(spectrum, m, delta)?;
    let cert = certified(spectrum)?;
    if !(c0 > 0.0 && c0 <= cert) {
        return Err(Error::Domain(format!(
            "c0 = {c0} is not covered by the certificate λ_k >= {cert}·k²"
        )));
    }
    let g = lower_gamma_three_quarters(c0 * delta, spec)?;
    let harmonic: f64 = lambdas.iter().map(|l| 1.0 / l.sqrt()).sum();
    Ok((c0 / (2.0 * PI)).sqrt() / PI * g * g * harmonic)
}

/// One row of the divergence table.
pub fn divergence_lower_bound(
    spectrum: &Spectrum,
    m: usize,
    delta: f64,
    time_weighted: bool,
    kernel_scale: KernelScale,
    spec: &QuadratureSpec,
) -> Result<DivergenceRow> {
    let lambdas = check_inputs(spectrum, m, delta)?;
    let (values, errors, converged) =
        weighted_time_integrals(&lambdas, delta, time_weighted, |_| Ok(1.0), spec)?;
    let pref = 2.0 / PI * kernel_scale.factor().powi(2);
    let d_m = pref * values.iter().map(|v| v * v).sum::<f64>();
    let error = pref * values.iter().zip(&errors).map(|(v, e)| 2.0 * v.abs() * e + e * e).sum::<f64>();
    let factor = bound_factor(kernel_scale, delta, time_weighted);
    let (sqq, chain) = match spectrum.certified_c0() {
        Some(c0) => (
            factor * sqq_bound(spectrum, m, delta, spec)?,
            factor * chain_bound(c0, delta, spectrum, m, spec)?,
        ),
        None => (f64::NAN, f64::NAN),
    };
    Ok(DivergenceRow {
        m,
        delta,
        d_m,
        sqq_bound: sqq,
        chain_bound: chain,
        sqrt_harmonic: lambdas.iter().map(|l| 1.0 / l.sqrt()).sum(),
        kernel_scale,
        time_weighted,
        error,
        converged,
    })
}

/// `Σ_k (∫₀^δ w_k(t) (2π)^{−m/2} ∫ F(⟨c(t), x⟩) x_k e^{−|x|²/2} dx dt)²` for
/// `f(x) = F(x_1 + … + x_m)`: the functional of the divergence argument
/// evaluated at one `f`. Inner integrals go through the polar reduction.
pub fn s_m_witness(
    profile: &Profile,
    spectrum: &Spectrum,
    m: usize,
    delta: f64,
    kernel_scale: KernelScale,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let lambdas = check_inputs(spectrum, m, delta)?;
    if profile.sup_bound() > 1.0 {
        return Err(Error::Domain(format!(
            "witness profiles must satisfy sup |F| <= 1, got {}",
            profile.sup_bound()
        )));
    }
    if profile.is_constant() {
        return Ok(0.0);
    }
    let inner = QuadratureSpec {
        abs_tol: spec.abs_tol * 0.1,
        rel_tol: spec.rel_tol * 0.1,
        ..spec.regular()
    };
    let (values, _, converged) = weighted_time_integrals(
        &lambdas,
        delta,
        false,
        |r| Ok(unit_integral(m, r, profile, &inner)?.value),
        spec,
    )?;
    if !converged {
        return Err(Error::QuadratureUnavailable(format!(
            "witness time integrals did not converge for {profile}"
        )));
    }
    Ok(kernel_scale.factor().powi(2) * values.iter().map(|v| v * v).sum::<f64>())
}

pub const SCALAR_BOUND: f64 = PI / std::f64::consts::SQRT_2;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarRow {
    pub lambda: f64,
    pub f_name: String,
    pub m: usize,
    pub sup_value: f64,
    pub error: f64,
    pub bound: f64,
    pub pass: bool,
}

/// `√λ sup_x |D R(1, M) f(x)|` for `f(x) = F(x_1)` over `λ × F × m`, with
/// `x = s e_1`, `s ∈ grid`.
pub fn scalar_bound_harness(
    lambdas: &[f64],
    suite: &[Profile],
    dims: &[usize],
    grid: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<ScalarRow>> {
    if suite.is_empty() {
        return Err(Error::Domain("the function suite is empty".into()));
    }
    if let Some(p) = suite.iter().find(|p| p.sup_bound() > 1.0) {
        return Err(Error::Domain(format!("profile {p} exceeds sup norm 1")));
    }
    let mut cases = Vec::new();
    for &lambda in lambdas {
        for profile in suite {
            for &m in dims {
                cases.push((lambda, profile.clone(), m));
            }
        }
    }
    cases
        .into_par_iter()
        .map(|(lambda, profile, m)| {
            let model = OUModel::new(m, Spectrum::constant(lambda)?)?;
            let f = CylindricalFn::first_coordinate(profile.clone(), m)?;
            let points: Vec<Vec<f64>> = grid
                .iter()
                .map(|&s| {
                    let mut x = vec![0.0; m];
                    x[0] = s;
                    x
                })
                .collect();
            let (value, error) = scalar_grad_sup(&model, &f, &points, spec)?;
            Ok(ScalarRow {
                lambda,
                f_name: profile.to_string(),
                m,
                sup_value: value,
                error,
                bound: SCALAR_BOUND,
                pass: value <= SCALAR_BOUND + 3.0 * error,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct P2Row {
    pub m: usize,
    pub ratio: f64,
    pub std_error: f64,
    pub d_m: f64,
}

/// Monte-Carlo estimate of `∫ |(−A)^{1/2} D u|² dμ / ∫ f² dμ` with
/// `u = R(1, L) f`, `f(x) = F(x_1 + … + x_m)` and `μ = N(0, diag 1/(2λ_k))`
/// the invariant measure. Gradients at the sampled points are computed by
/// quadrature; the reported error is the delta-method standard error of
/// the ratio. `d_m` is the divergence bound at the same `m` for contrast.
#[allow(clippy::too_many_arguments)]
pub fn p2_contrast(
    spectrum: &Spectrum,
    dims: &[usize],
    profile: &Profile,
    n_samples: usize,
    rng: RngStream,
    delta: f64,
    kernel_scale: KernelScale,
    spec: &QuadratureSpec,
) -> Result<Vec<P2Row>> {
    if n_samples < 2 {
        return Err(Error::Domain("need at least two samples".into()));
    }
    dims.iter()
        .map(|&m| {
            let model = OUModel::new(m, spectrum.clone())?;
            let lambdas = model.lambdas().to_vec();
            let f = CylindricalFn::summed(profile.clone(), m)?;
            let mu = GaussianDiag::new(lambdas.iter().map(|l| 0.5 / l).collect())?;
            let ys = mu.sample(n_samples, rng.substream(m as u64));
            let pairs: Vec<(f64, f64)> = ys
                .par_chunks(m)
                .map(|y| {
                    let fy = f.eval_unchecked(y);
                    if profile.is_constant() {
                        return Ok((0.0, fy * fy));
                    }
                    let (g, _, _) = grad_resolvent_cylindrical(&model, &f, y, spec)?;
                    let g2: f64 = g.iter().zip(&lambdas).map(|(g, l)| l * g * g).sum();
                    Ok((g2, fy * fy))
                })
                .collect::<Result<_>>()?;
            let (ratio, se) = ratio_estimate(&pairs);
            let d_m = if m >= 2 && !spectrum.is_constant() {
                divergence_lower_bound(spectrum, m, delta, false, kernel_scale, spec)?.d_m
            } else {
                f64::NAN
            };
            Ok(P2Row {
                m,
                ratio,
                std_error: se,
                d_m,
            })
        })
        .collect()
}

/// `ā / b̄` and its delta-method standard error.
fn ratio_estimate(pairs: &[(f64, f64)]) -> (f64, f64) {
    let n = pairs.len() as f64;
    let ma = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let mb = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    if mb == 0.0 {
        return (f64::NAN, f64::NAN);
    }
    let r = ma / mb;
    let var = pairs
        .iter()
        .map(|(a, b)| (a - r * b).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    (r, (var / n).sqrt() / mb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfn::make_smooth_step;

    fn k2() -> Spectrum {
        Spectrum::quadratic(1.0).unwrap()
    }

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn integrand_single_coordinate_and_limits() {
        let s = Spectrum::explicit(vec![2.0], None).unwrap();
        let t: f64 = 0.3;
        let direct = 2.0 * (-2.0 * t).exp() / (1.0 - (-4.0 * t).exp()).sqrt();
        let got = divergence_integrand(&s, 1, 1, t).unwrap();
        assert!((got - direct).abs() < 1e-14 * direct);
        assert!(divergence_integrand(&k2(), 4, 4, 30.0).unwrap() < 1e-100);
        assert!(divergence_integrand(&k2(), 4, 1, 0.0).is_err());
        // √t · integrand → √(λ_k/2) / √m as t → 0
        let t = 1e-10;
        for k in 1..=4 {
            let lk = (k * k) as f64;
            let v = divergence_integrand(&k2(), 4, k, t).unwrap() * t.sqrt();
            let want = (lk / 2.0).sqrt() / 2.0;
            assert!((v - want).abs() < 1e-4 * want);
        }
    }

    #[test]
    fn two_dimensional_oracle() {
        // straightforward evaluation of the displayed integrand
        let delta = 1.0;
        let s = spec().singular_lower(-0.5);
        let mut d = 0.0;
        for k in 1..=2u32 {
            let lk = f64::from(k * k);
            let r = integrate(
                |t| {
                    let c: Vec<f64> = [1.0, 4.0]
                        .iter()
                        .map(|l: &f64| ((1.0 - (-2.0 * l * t).exp()) / (2.0 * l)).sqrt())
                        .collect();
                    let norm = (c[0] * c[0] + c[1] * c[1]).sqrt();
                    lk * (-lk * t).exp() / (1.0 - (-2.0 * lk * t).exp()).sqrt() * c[k as usize - 1] / norm
                },
                0.0,
                delta,
                &s,
            )
            .unwrap();
            d += r.value * r.value;
        }
        d *= 2.0 / PI;
        let row = divergence_lower_bound(&k2(), 2, delta, false, KernelScale::PaperSi1, &spec()).unwrap();
        assert!((row.d_m - d).abs() < 1e-9 * d, "{} vs {d}", row.d_m);
        let derived = divergence_lower_bound(&k2(), 2, delta, false, KernelScale::Derived, &spec()).unwrap();
        assert!((derived.d_m / row.d_m - 2.0).abs() < 1e-12);
    }

    #[test]
    fn inequality_chain_and_growth() {
        let mut prev = 0.0;
        for m in [2, 8, 64, 512] {
            for tw in [false, true] {
                let row = divergence_lower_bound(&k2(), m, 1.0, tw, KernelScale::PaperSi1, &spec()).unwrap();
                assert!(row.converged);
                assert!(row.chain_holds(1e-9), "{row:?}");
                if !tw {
                    assert!(row.d_m > prev);
                    prev = row.d_m;
                }
            }
        }
    }

    #[test]
    fn refinement_invariance() {
        let coarse = QuadratureSpec::with_tolerances(1e-8, 1e-12);
        let fine = QuadratureSpec::with_tolerances(1e-12, 1e-15);
        let a = divergence_lower_bound(&k2(), 64, 1.0, false, KernelScale::PaperSi1, &coarse).unwrap();
        let b = divergence_lower_bound(&k2(), 64, 1.0, false, KernelScale::PaperSi1, &fine).unwrap();
        assert!((a.d_m - b.d_m).abs() < 1e-6 * b.d_m);
    }

    #[test]
    fn lower_gamma_against_series() {
        // γ(a, x) = x^a e^{−x} Σ_n x^n / (a (a+1) … (a+n))
        for x in [0.1, 1.0, 5.0] {
            let mut term = 1.0 / 0.75;
            let mut sum = term;
            for n in 1..200 {
                term *= x / (0.75 + n as f64);
                sum += term;
            }
            let want = x.powf(0.75) * (-x).exp() * sum;
            let got = lower_gamma_three_quarters(x, &spec()).unwrap();
            assert!((got - want).abs() < 1e-11, "{x}: {got} {want}");
        }
        // Γ(3/4) = 1.2254167024651776
        let full = lower_gamma_three_quarters(1e6, &spec()).unwrap();
        assert!((full - 1.225_416_702_465_177_6).abs() < 1e-10);
    }

    #[test]
    fn chain_bound_properties() {
        let a = chain_bound(1.0, 1.0, &k2(), 1024, &spec()).unwrap();
        let b = chain_bound(1.0, 1.0, &k2(), 2048, &spec()).unwrap();
        let h = |m: usize| k2().sqrt_harmonic_sum(m).unwrap();
        assert!((b / a - h(2048) / h(1024)).abs() < 1e-14);
        // smaller c0 is still covered by the certificate of λ_k = 2k²
        let s = Spectrum::quadratic(2.0).unwrap();
        let half = chain_bound(1.0, 1.0, &s, 16, &spec()).unwrap();
        let g = lower_gamma_three_quarters(1.0, &spec()).unwrap();
        let want = (1.0 / (2.0 * PI)).sqrt() / PI * g * g * s.sqrt_harmonic_sum(16).unwrap();
        assert!((half - want).abs() < 1e-15);
        assert!(chain_bound(3.0, 1.0, &s, 16, &spec()).is_err());
        let uncertified = Spectrum::explicit(vec![1.0, 4.0, 9.0], None).unwrap();
        assert!(chain_bound(1.0, 1.0, &uncertified, 3, &spec()).is_err());
    }

    #[test]
    fn constant_spectrum_is_rejected() {
        let c = Spectrum::constant(1.0).unwrap();
        assert!(matches!(
            divergence_lower_bound(&c, 4, 1.0, false, KernelScale::Derived, &spec()),
            Err(Error::UnsupportedSpectrum(_))
        ));
    }

    #[test]
    fn sign_witness_equals_bound() {
        for m in [2, 3, 8] {
            let row = divergence_lower_bound(&k2(), m, 1.0, false, KernelScale::PaperSi1, &spec()).unwrap();
            let w = s_m_witness(&Profile::Sign, &k2(), m, 1.0, KernelScale::PaperSi1, &spec()).unwrap();
            assert!((w - row.d_m).abs() < 1e-6 * row.d_m, "m={m}: {w} {}", row.d_m);
        }
        assert_eq!(
            s_m_witness(&Profile::Constant(1.0), &k2(), 4, 1.0, KernelScale::PaperSi1, &spec()).unwrap(),
            0.0
        );
    }

    #[test]
    fn smooth_step_witnesses_increase() {
        let m = 4;
        let d = divergence_lower_bound(&k2(), m, 1.0, false, KernelScale::PaperSi1, &spec()).unwrap().d_m;
        let s = QuadratureSpec::with_tolerances(1e-8, 1e-12);
        let mut prev = 0.0;
        for n in [1, 4, 16] {
            let w = s_m_witness(&make_smooth_step(n).unwrap(), &k2(), m, 1.0, KernelScale::PaperSi1, &s).unwrap();
            assert!(w >= prev && w <= d * (1.0 + 1e-6), "n={n}: {w}");
            prev = w;
        }
    }

    #[test]
    fn ratio_estimator() {
        let pairs = [(2.0, 1.0), (4.0, 1.0), (6.0, 1.0)];
        let (r, se) = ratio_estimate(&pairs);
        assert!((r - 4.0).abs() < 1e-15);
        assert!((se - (4.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn p2_contrast_trivial_cases() {
        let one = p2_contrast(&k2(), &[2], &Profile::Constant(1.0), 10, RngStream::new(1, 0), 1.0, KernelScale::Derived, &spec()).unwrap();
        assert_eq!(one[0].ratio, 0.0);
        let rng = RngStream::new(5, 0);
        let s = QuadratureSpec::with_tolerances(1e-7, 1e-10);
        let a = p2_contrast(&k2(), &[2], &Profile::Tanh, 50, rng, 1.0, KernelScale::Derived, &s).unwrap();
        let b = p2_contrast(&k2(), &[2], &Profile::Tanh.scaled(2.0), 50, rng, 1.0, KernelScale::Derived, &s).unwrap();
        assert!((a[0].ratio - b[0].ratio).abs() < 1e-9 * a[0].ratio);
    }

    #[test]
    fn scalar_harness_rows() {
        let grid: Vec<f64> = (-10..=10).map(|i| i as f64 * 0.5).collect();
        let rows = scalar_bound_harness(&[1.0, 4.0], &[Profile::Constant(1.0), Profile::Tanh], &[1, 2], &grid, &spec()).unwrap();
        assert_eq!(rows.len(), 8);
        assert!(rows.iter().all(|r| r.pass));
        assert!(rows.iter().filter(|r| r.f_name == "one").all(|r| r.sup_value == 0.0));
        assert!(scalar_bound_harness(&[1.0], &[], &[1], &grid, &spec()).is_err());
    }
}
