//! Rank-one Gaussian integrals
//! `I_{m,k}(F; c) = (2π)^{−m/2} ∫ F(⟨c, x⟩) x_k e^{−|x|²/2} dx`
//! reduced to two-dimensional quadratures in polar coordinates.
//!
//! Only the factor `c_k / |c|` depends on `k`, so every routine is built on
//! a "unit" integral `J_m(r)` with `I_{m,k}(F; c) = (c_k / |c|) J_m(|c|)`.

use std::cell::Cell;
use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::specfun::{
    integrate_with_breaks, log_gamma, log_gaussian_radial_moment, Endpoint, QuadResult,
    QuadratureSpec,
};
use crate::testfn::Profile;

const LN_PI: f64 = 1.144_729_885_849_400_2;
const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionTask {
    pub m: usize,
    /// 1-based coordinate index.
    pub k: usize,
    pub c: Vec<f64>,
    pub profile: Profile,
}

impl ReductionTask {
    pub fn new(k: usize, c: Vec<f64>, profile: Profile) -> Result<Self> {
        let m = c.len();
        if m < 2 {
            return Err(Error::Domain(format!(
                "the polar reduction needs m >= 2, got m = {m}"
            )));
        }
        if k == 0 || k > m {
            return Err(Error::IndexOutOfRange { index: k, len: m });
        }
        check_direction(&c)?;
        Ok(Self { m, k, c, profile })
    }

    pub fn norm(&self) -> f64 {
        norm(&self.c)
    }

    /// `c_k / |c|`.
    pub fn cosine(&self) -> f64 {
        self.c[self.k - 1] / self.norm()
    }
}

fn norm(c: &[f64]) -> f64 {
    c.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check_direction(c: &[f64]) -> Result<()> {
    if c.iter().any(|x| !x.is_finite()) || c.iter().all(|x| *x == 0.0) {
        return Err(Error::Domain("c must be a finite nonzero vector".into()));
    }
    Ok(())
}

/// `ln[ 2π (√π)^{m−3} / ((2π)^{m/2} Γ((m−1)/2)) ]`.
pub fn log_prefactor(m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::Domain(format!("prefactor needs m >= 2, got {m}")));
    }
    let mf = m as f64;
    let ln_two_pi = LN_2 + LN_PI;
    Ok(ln_two_pi + 0.5 * (mf - 3.0) * LN_PI - 0.5 * mf * ln_two_pi - log_gamma(0.5 * (mf - 1.0))?)
}

/// `√(2/π) c_k / |c|`, the value of `I_{m,k}` for the sign profile.
pub fn sign_closed_form(c: &[f64], k: usize) -> Result<f64> {
    if c.is_empty() {
        return Err(Error::Domain("c must be nonempty".into()));
    }
    if k == 0 || k > c.len() {
        return Err(Error::IndexOutOfRange {
            index: k,
            len: c.len(),
        });
    }
    check_direction(c)?;
    Ok(SQRT_2_OVER_PI * c[k - 1] / norm(c))
}

/// Shared radial machinery: `scale · ∫₀^R χ(ρ) g(ρ) dρ` where
/// `χ(ρ) = ρ^m e^{−ρ²/2} / ∫₀^∞ ρ^m e^{−ρ²/2}` is a chi density with
/// `m + 1` degrees of freedom and `g` is an inner angular integral bounded
/// by `g_sup`. The omitted tail is bounded by `e^{−(R − √(m+1))²/2} g_sup`.
fn radial_outer<G>(
    m: usize,
    log_scale: f64,
    g_sup: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
    inner: G,
) -> Result<QuadResult>
where
    G: Fn(f64, &QuadratureSpec) -> Result<QuadResult>,
{
    let mf = m as f64;
    let log_moment = log_gaussian_radial_moment(m as u32);
    let scale = (log_scale + log_moment).exp();
    let cutoff = mf.sqrt() + 12.0;
    let tail = (-0.5 * (cutoff - (mf + 1.0).sqrt()).powi(2)).exp() * g_sup;

    let unit_spec = QuadratureSpec {
        abs_tol: spec.abs_tol / scale,
        ..spec.regular()
    };
    let inner_spec = QuadratureSpec {
        abs_tol: 0.1 * unit_spec.abs_tol,
        rel_tol: 0.1 * spec.rel_tol,
        ..spec.clone()
    };
    let inner_err = Cell::new(0.0_f64);
    let inner_ok = Cell::new(true);
    let failure: Cell<Option<Error>> = Cell::new(None);

    let mut cuts = vec![mf.sqrt()];
    cuts.extend(breaks.iter().copied().filter(|b| b.is_finite() && *b > 0.0));
    let outer = integrate_with_breaks(
        |rho| {
            if rho <= 0.0 {
                return 0.0;
            }
            let density = (mf * rho.ln() - 0.5 * rho * rho - log_moment).exp();
            if density == 0.0 {
                return 0.0;
            }
            match inner(rho, &inner_spec) {
                Ok(r) => {
                    inner_err.set(inner_err.get().max(r.error_estimate));
                    inner_ok.set(inner_ok.get() && r.converged);
                    density * r.value
                }
                Err(e) => {
                    failure.set(Some(e));
                    0.0
                }
            }
        },
        0.0,
        cutoff,
        &cuts,
        &unit_spec,
    )?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(QuadResult {
        value: scale * outer.value,
        error_estimate: scale * (outer.error_estimate + inner_err.get() + tail),
        converged: outer.converged && inner_ok.get(),
    })
}

/// `J_m(r)` from the full angular range `ϑ ∈ (0, π)`.
pub fn radial_reduce_unit(m: usize, r: f64, profile: &Profile, spec: &QuadratureSpec) -> Result<QuadResult> {
    spec.validate()?;
    let lp = log_prefactor(m)?;
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("radius must be finite and nonnegative, got {r}")));
    }
    if r == 0.0 || profile.is_constant() {
        return Ok(QuadResult::exact(0.0));
    }
    let power = (m - 2) as i32;
    let knots: Vec<f64> = profile.breakpoints();
    let rho_breaks: Vec<f64> = knots.iter().map(|b| b.abs() / r).collect();
    let g_sup = profile.sup_bound() * 2.0 / (m as f64 - 1.0);
    radial_outer(m, lp, g_sup, &rho_breaks, spec, |rho, inner_spec| {
        let s = r * rho;
        let mut theta_breaks = vec![0.5 * PI];
        theta_breaks.extend(
            knots
                .iter()
                .filter(|b| b.abs() < s)
                .map(|b| (b / s).acos()),
        );
        integrate_with_breaks(
            |th| {
                let (sn, cs) = th.sin_cos();
                cs * sn.powi(power) * profile.eval(s * cs)
            },
            0.0,
            PI,
            &theta_breaks,
            &inner_spec.regular(),
        )
    })
}

/// `J_m(r)` for an odd profile from the half-range formula in `x = cos ϑ`.
pub fn odd_reduce_unit(m: usize, r: f64, profile: &Profile, spec: &QuadratureSpec) -> Result<QuadResult> {
    spec.validate()?;
    let lp = log_prefactor(m)?;
    if !profile.is_odd() {
        return Err(Error::NotOdd(profile.to_string()));
    }
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("radius must be finite and nonnegative, got {r}")));
    }
    if r == 0.0 || profile.is_zero() {
        return Ok(QuadResult::exact(0.0));
    }
    let alpha = 0.5 * (m as f64 - 3.0);
    let upper = if alpha.fract() != 0.0 && alpha < 1.0 {
        Endpoint::Algebraic(alpha)
    } else {
        Endpoint::Regular
    };
    let knots: Vec<f64> = profile.breakpoints().into_iter().filter(|b| *b > 0.0).collect();
    let rho_breaks: Vec<f64> = knots.iter().map(|b| b / r).collect();
    let g_sup = profile.sup_bound() * 2.0 / (m as f64 - 1.0);
    radial_outer(m, lp, g_sup, &rho_breaks, spec, |rho, inner_spec| {
        let s = r * rho;
        let x_breaks: Vec<f64> = knots.iter().map(|b| b / s).filter(|x| *x < 1.0).collect();
        let x_spec = QuadratureSpec {
            lower: Endpoint::Regular,
            upper,
            ..inner_spec.clone()
        };
        integrate_with_breaks(
            |x| {
                let w = ((1.0 - x) * (1.0 + x)).powf(alpha);
                2.0 * x * w * profile.eval(s * x)
            },
            0.0,
            1.0,
            &x_breaks,
            &x_spec,
        )
    })
}

/// `I_{m,k}(F; c)` via the full polar reduction.
pub fn radial_reduce(task: &ReductionTask, spec: &QuadratureSpec) -> Result<QuadResult> {
    Ok(radial_reduce_unit(task.m, task.norm(), &task.profile, spec)?.scale(task.cosine()))
}

/// `I_{m,k}(F; c)` for odd `F` via the half-range reduction.
pub fn odd_reduce(task: &ReductionTask, spec: &QuadratureSpec) -> Result<QuadResult> {
    Ok(odd_reduce_unit(task.m, task.norm(), &task.profile, spec)?.scale(task.cosine()))
}

fn line_setup(profile: &Profile, a: f64, sigma: f64, spec: &QuadratureSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    if !(sigma >= 0.0 && sigma.is_finite()) || !a.is_finite() {
        return Err(Error::Domain(format!("bad line parameters a = {a}, σ = {sigma}")));
    }
    Ok(profile
        .breakpoints()
        .iter()
        .map(|b| ((b - a) / sigma).abs())
        .collect())
}

/// Truncation point `W` for the half-line integrals and the bound
/// `2 sup|F| φ(W)` on what lies beyond it (valid for both moments once `W ≥ 1`).
fn line_cutoff(profile: &Profile, spec: &QuadratureSpec) -> (f64, f64) {
    let g = profile.sup_bound().max(f64::MIN_POSITIVE);
    let budget = 0.01 * spec.abs_tol.max(spec.rel_tol * 1e-3).max(1e-300);
    // 2 g φ(W) ≤ budget
    let w = (2.0 * (2.0 * g * 0.398_942_280_401_432_7 / budget).ln()).max(1.0).sqrt();
    (w, 2.0 * g * phi(w))
}

#[inline]
fn phi(w: f64) -> f64 {
    (-0.5 * w * w).exp() * 0.398_942_280_401_432_7
}

/// `E[F(a + σW)]` for `W ~ N(0, 1)`.
pub fn line_mean(profile: &Profile, a: f64, sigma: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    let breaks = line_setup(profile, a, sigma, spec)?;
    if sigma == 0.0 || profile.is_constant() {
        return Ok(QuadResult::exact(profile.eval(a)));
    }
    let (cut, tail) = line_cutoff(profile, spec);
    let mut r = integrate_with_breaks(
        |w| phi(w) * (profile.eval(a + sigma * w) + profile.eval(a - sigma * w)),
        0.0,
        cut,
        &breaks,
        &spec.regular(),
    )?;
    r.error_estimate += tail;
    Ok(r)
}

/// `E[W F(a + σW)]` for `W ~ N(0, 1)`: the one-dimensional instance of the
/// reduction, also valid off the origin. Closed form `2φ(a/σ)` for the sign.
pub fn line_first_moment(profile: &Profile, a: f64, sigma: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    let breaks = line_setup(profile, a, sigma, spec)?;
    if sigma == 0.0 || profile.is_constant() {
        return Ok(QuadResult::exact(0.0));
    }
    if *profile == Profile::Sign {
        return Ok(QuadResult::exact(2.0 * phi(a / sigma)));
    }
    let (cut, tail) = line_cutoff(profile, spec);
    let mut r = integrate_with_breaks(
        |w| phi(w) * w * (profile.eval(a + sigma * w) - profile.eval(a - sigma * w)),
        0.0,
        cut,
        &breaks,
        &spec.regular(),
    )?;
    r.error_estimate += tail;
    Ok(r)
}

/// Both [`line_mean`] and [`line_first_moment`].
pub fn line_moments(profile: &Profile, a: f64, sigma: f64, spec: &QuadratureSpec) -> Result<(QuadResult, QuadResult)> {
    Ok((
        line_mean(profile, a, sigma, spec)?,
        line_first_moment(profile, a, sigma, spec)?,
    ))
}

/// `J_m(r) = E[W F(rW)]`, routed through the polar reductions for `m ≥ 2`
/// (half range when the profile is odd) and the line integral for `m = 1`.
pub fn unit_integral(m: usize, r: f64, profile: &Profile, spec: &QuadratureSpec) -> Result<QuadResult> {
    match m {
        0 => Err(Error::Domain("dimension must be at least 1".into())),
        1 => line_first_moment(profile, 0.0, r, spec),
        _ if profile.is_odd() => odd_reduce_unit(m, r, profile, spec),
        _ => radial_reduce_unit(m, r, profile, spec),
    }
}
