//! The finite-dimensional OU semigroup `P_t`, its resolvent `R(1, L)` and
//! gradient representations, for the generator
//! `L = ½Δ − Σ λ_k x_k ∂_k` on `R^m`.
//!
//! Under `P_t`, `f(x)` is averaged over `N(e^{−Λt}x, diag c_k(t)²)`.
//! Cylindrical observables `F(⟨d, x⟩)` collapse every Gaussian integral to a
//! single line integral; other observables use tensor quadrature (`m ≤ 3`)
//! or Monte Carlo.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::oracle::{mc_mean, mc_mean_vec, MCEstimate, McConfig};
use crate::reduction::{line_first_moment, line_mean, unit_integral};
use crate::specfun::{
    geometric_breaks, integrate, integrate_shared, one_minus_exp_ratio, QuadResult, QuadratureSpec,
};
use crate::spectrum::{cov_scalar, Spectrum};
use crate::testfn::{CylindricalFn, Profile};

/// Normalization of the per-coordinate gradient weight.
///
/// `Derived` is `√λ e^{−λt}/c(t) = √2 λ e^{−λt}(1 − e^{−2λt})^{−1/2}`, the
/// exact derivative of the Gaussian kernel. `PaperSi1` drops the `√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelScale {
    #[default]
    Derived,
    PaperSi1,
}

impl KernelScale {
    /// Multiplier on `λ e^{−λt}(1 − e^{−2λt})^{−1/2}`.
    pub fn factor(self) -> f64 {
        match self {
            KernelScale::Derived => SQRT_2,
            KernelScale::PaperSi1 => 1.0,
        }
    }

    /// Multiplier relative to the exact (derived) gradient.
    pub fn relative_to_derived(self) -> f64 {
        self.factor() / SQRT_2
    }
}

impl fmt::Display for KernelScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KernelScale::Derived => "derived",
            KernelScale::PaperSi1 => "paper_si1",
        })
    }
}

impl FromStr for KernelScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "derived" => Ok(KernelScale::Derived),
            "paper_si1" => Ok(KernelScale::PaperSi1),
            other => Err(Error::Parse(format!(
                "unknown kernel scale {other:?} (expected derived or paper_si1)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OUModel {
    m: usize,
    spectrum: Spectrum,
    lambdas: Vec<f64>,
    kernel_scale: KernelScale,
}

impl OUModel {
    pub fn new(m: usize, spectrum: Spectrum) -> Result<Self> {
        let lambdas = spectrum.lambdas(m)?;
        Ok(Self {
            m,
            spectrum,
            lambdas,
            kernel_scale: KernelScale::Derived,
        })
    }

    pub fn with_kernel_scale(mut self, scale: KernelScale) -> Self {
        self.kernel_scale = scale;
        self
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn kernel_scale(&self) -> KernelScale {
        self.kernel_scale
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: x.len(),
            });
        }
        Ok(())
    }

    fn check_observable(&self, f: &dyn Observable) -> Result<()> {
        if f.dim() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                got: f.dim(),
            });
        }
        Ok(())
    }

    /// `e^{−λ_k t} x_k` and `c_k(t)`.
    fn transition(&self, t: f64, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mean = self
            .lambdas
            .iter()
            .zip(x)
            .map(|(l, xi)| (-l * t).exp() * xi)
            .collect();
        let sd = self.lambdas.iter().map(|&l| cov_scalar(l, t)).collect();
        (mean, sd)
    }
}

/// A real function on `R^m`.
pub trait Observable: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> f64;

    /// A bound on `sup |f|`, infinite when unknown.
    fn sup_bound(&self) -> f64 {
        f64::INFINITY
    }

    /// `Some` when `f(x) = F(⟨d, x⟩)`, enabling the line-integral paths.
    fn as_cylindrical(&self) -> Option<&CylindricalFn> {
        None
    }
}

impl Observable for CylindricalFn {
    fn dim(&self) -> usize {
        CylindricalFn::dim(self)
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.eval_unchecked(x)
    }

    fn sup_bound(&self) -> f64 {
        CylindricalFn::sup_bound(self)
    }

    fn as_cylindrical(&self) -> Option<&CylindricalFn> {
        Some(self)
    }
}

/// Wraps a closure as an [`Observable`].
pub struct FnObservable<F> {
    dim: usize,
    sup: f64,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> FnObservable<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self {
            dim,
            sup: f64::INFINITY,
            f,
        }
    }

    pub fn with_sup_bound(mut self, sup: f64) -> Self {
        self.sup = sup;
        self
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> Observable for FnObservable<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    fn sup_bound(&self) -> f64 {
        self.sup
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Quadrature(QuadratureSpec),
    MonteCarlo(McConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodKind {
    Quadrature,
    MonteCarlo,
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MethodKind::Quadrature => "quadrature",
            MethodKind::MonteCarlo => "mc",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Estimate {
    Quad(QuadResult),
    Mc(MCEstimate),
}

impl Estimate {
    pub fn value(&self) -> f64 {
        match self {
            Estimate::Quad(q) => q.value,
            Estimate::Mc(m) => m.mean,
        }
    }

    /// Quadrature error estimate, or one Monte-Carlo standard error.
    pub fn error(&self) -> f64 {
        match self {
            Estimate::Quad(q) => q.error_estimate,
            Estimate::Mc(m) => m.std_error,
        }
    }

    pub fn method(&self) -> MethodKind {
        match self {
            Estimate::Quad(_) => MethodKind::Quadrature,
            Estimate::Mc(_) => MethodKind::MonteCarlo,
        }
    }
}

/// `((−A)^{1/2} D u)(0)` componentwise, `u = R(1, L) f`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientVector {
    pub components: Vec<f64>,
    pub errors: Vec<f64>,
    pub norm_sq: f64,
    pub method: MethodKind,
    pub kernel_scale: KernelScale,
    pub converged: bool,
}

impl GradientVector {
    fn new(components: Vec<f64>, errors: Vec<f64>, method: MethodKind, scale: KernelScale, converged: bool) -> Self {
        let norm_sq = components.iter().map(|g| g * g).sum();
        Self {
            components,
            errors,
            norm_sq,
            method,
            kernel_scale: scale,
            converged,
        }
    }
}

const LN_TWO_PI: f64 = 1.837_877_066_409_345_5;

/// `E[g(Z)]`, `Z ~ N(0, I_m)`, by nested adaptive quadrature (`m ≤ 3`).
fn tensor_expect(g: &dyn Fn(&[f64]) -> f64, m: usize, spec: &QuadratureSpec) -> Result<QuadResult> {
    fn level(
        g: &dyn Fn(&[f64]) -> f64,
        z: &mut Vec<f64>,
        m: usize,
        spec: &QuadratureSpec,
        ok: &std::cell::Cell<bool>,
    ) -> f64 {
        if z.len() == m {
            return g(z);
        }
        let depth = z.len();
        let inner = QuadratureSpec {
            abs_tol: spec.abs_tol * 0.1,
            rel_tol: spec.rel_tol * 0.1,
            ..spec.regular()
        };
        let z_cell = std::cell::RefCell::new(std::mem::take(z));
        let r = integrate(
            |w| {
                let dens = (-0.5 * w * w - 0.5 * LN_TWO_PI).exp();
                let mut zz = z_cell.borrow_mut();
                let mut total = 0.0;
                for s in [w, -w] {
                    zz.truncate(depth);
                    zz.push(s);
                    let mut owned = std::mem::take(&mut *zz);
                    total += level(g, &mut owned, m, &inner, ok);
                    *zz = owned;
                }
                dens * total
            },
            0.0,
            f64::INFINITY,
            if depth == 0 { spec } else { &inner },
        );
        *z = z_cell.into_inner();
        z.truncate(depth);
        match r {
            Ok(r) => {
                ok.set(ok.get() && r.converged);
                r.value
            }
            Err(_) => {
                ok.set(false);
                f64::NAN
            }
        }
    }
    if m > 3 {
        return Err(Error::QuadratureUnavailable(format!(
            "tensor quadrature supports m <= 3, got m = {m}; use a cylindrical \
             observable or Monte Carlo"
        )));
    }
    spec.validate()?;
    let ok = std::cell::Cell::new(true);
    let mut z = Vec::with_capacity(m);
    let value = level(g, &mut z, m, spec, &ok);
    Ok(QuadResult {
        value,
        error_estimate: spec.tolerance_for(value),
        converged: ok.get() && value.is_finite(),
    })
}

/// `P_t f(x)`.
pub fn semigroup_apply(model: &OUModel, f: &dyn Observable, t: f64, x: &[f64], method: &Method) -> Result<Estimate> {
    model.check_observable(f)?;
    model.check_point(x)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time must be finite and nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(Estimate::Quad(QuadResult::exact(f.eval(x))));
    }
    let (mean, sd) = model.transition(t, x);
    match method {
        Method::Quadrature(spec) => {
            if let Some(cyl) = f.as_cylindrical() {
                let d = cyl.direction();
                let a: f64 = d.iter().zip(&mean).map(|(u, v)| u * v).sum();
                let sigma = d.iter().zip(&sd).map(|(u, v)| (u * v).powi(2)).sum::<f64>().sqrt();
                return Ok(Estimate::Quad(line_mean(cyl.profile(), a, sigma, spec)?));
            }
            let g = |z: &[f64]| {
                let y: Vec<f64> = mean.iter().zip(&sd).zip(z).map(|((a, s), z)| a + s * z).collect();
                f.eval(&y)
            };
            Ok(Estimate::Quad(tensor_expect(&g, model.m, spec)?))
        }
        Method::MonteCarlo(cfg) => Ok(Estimate::Mc(mc_mean(model.m, cfg, |z| {
            let y: Vec<f64> = mean.iter().zip(&sd).zip(z).map(|((a, s), z)| a + s * z).collect();
            f.eval(&y)
        }))),
    }
}

/// `u(x) = R(1, L) f(x) = ∫₀^∞ e^{−t} P_t f(x) dt`.
///
/// Monte Carlo draws the time as well: with `T ~ Exp(1)` (obtained as half
/// the squared norm of two extra normals), `u(x) = E[f(e^{−ΛT}x + c(T)Z)]`.
pub fn resolvent_apply(model: &OUModel, f: &dyn Observable, x: &[f64], method: &Method) -> Result<Estimate> {
    model.check_observable(f)?;
    model.check_point(x)?;
    match method {
        Method::Quadrature(spec) => {
            spec.validate()?;
            let inner = Method::Quadrature(QuadratureSpec {
                abs_tol: spec.abs_tol * 0.1,
                rel_tol: spec.rel_tol * 0.1,
                ..spec.regular()
            });
            let failure = std::cell::Cell::new(None);
            let r = integrate(
                |t| match semigroup_apply(model, f, t, x, &inner) {
                    Ok(e) => (-t).exp() * e.value(),
                    Err(e) => {
                        failure.set(Some(e));
                        0.0
                    }
                },
                0.0,
                f64::INFINITY,
                &spec.regular(),
            )?;
            if let Some(e) = failure.take() {
                return Err(e);
            }
            Ok(Estimate::Quad(r))
        }
        Method::MonteCarlo(cfg) => {
            let m = model.m;
            Ok(Estimate::Mc(mc_mean(m + 2, cfg, |z| {
                let t = 0.5 * (z[m] * z[m] + z[m + 1] * z[m + 1]);
                let y: Vec<f64> = (0..m)
                    .map(|k| {
                        let l = model.lambdas[k];
                        (-l * t).exp() * x[k] + cov_scalar(l, t) * z[k]
                    })
                    .collect();
                f.eval(&y)
            })))
        }
    }
}

/// `D_h P_t f(x) = E[Σ_k h_k e^{−λ_k t} c_k(t)^{−1} Z_k f(e^{−Λt}x + c(t)Z)]`.
pub fn grad_semigroup(
    model: &OUModel,
    f: &dyn Observable,
    t: f64,
    x: &[f64],
    h: &[f64],
    method: &Method,
) -> Result<Estimate> {
    model.check_observable(f)?;
    model.check_point(x)?;
    model.check_point(h)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!(
            "gradient kernel needs t > 0 (singular at t = 0), got {t}"
        )));
    }
    let (mean, sd) = model.transition(t, x);
    let weight: Vec<f64> = (0..model.m)
        .map(|k| h[k] * (-model.lambdas[k] * t).exp() / sd[k])
        .collect();
    match method {
        Method::Quadrature(spec) => {
            if let Some(cyl) = f.as_cylindrical() {
                let d = cyl.direction();
                let a: f64 = d.iter().zip(&mean).map(|(u, v)| u * v).sum();
                let sigma = d.iter().zip(&sd).map(|(u, v)| (u * v).powi(2)).sum::<f64>().sqrt();
                let lead: f64 = (0..model.m)
                    .map(|k| h[k] * (-model.lambdas[k] * t).exp() * d[k])
                    .sum();
                if lead == 0.0 {
                    return Ok(Estimate::Quad(QuadResult::exact(0.0)));
                }
                let first = line_first_moment(cyl.profile(), a, sigma, spec)?;
                return Ok(Estimate::Quad(first.scale(lead / sigma)));
            }
            let g = |z: &[f64]| {
                let y: Vec<f64> = mean.iter().zip(&sd).zip(z).map(|((a, s), z)| a + s * z).collect();
                let w: f64 = weight.iter().zip(z).map(|(a, b)| a * b).sum();
                w * f.eval(&y)
            };
            Ok(Estimate::Quad(tensor_expect(&g, model.m, spec)?))
        }
        Method::MonteCarlo(cfg) => Ok(Estimate::Mc(mc_mean(model.m, cfg, |z| {
            let y: Vec<f64> = mean.iter().zip(&sd).zip(z).map(|((a, s), z)| a + s * z).collect();
            let w: f64 = weight.iter().zip(z).map(|(a, b)| a * b).sum();
            w * f.eval(&y)
        }))),
    }
}

/// Shared-grid quadrature of `∫₀^∞ e^{−t} e^{−λ_k t} q(t) dt` for every `k`,
/// where `q(t) = E[W F(a(t) + σ(t)W)] / σ(t)` blows up at most like
/// `t^{−1/2}`. On `[0, 1]` the substitution `t = s²` is used, with
/// `sigma_over_s(s) = σ(s²)/s` kept finite at `s = 0`. The tail is cut at a
/// point where `g_sup = sup|F|` bounds the remainder, which joins the error.
fn laplace_gradient_integrals<Q>(
    lambdas: &[f64],
    sigma_over_s: &(dyn Fn(f64) -> f64 + Sync),
    first_moment: Q,
    g_sup: f64,
    spec: &QuadratureSpec,
) -> Result<(Vec<f64>, Vec<f64>, bool)>
where
    Q: Fn(f64, f64) -> Result<f64> + Sync,
{
    let failure = std::sync::Mutex::new(None);
    let record = |e: Error| {
        failure.lock().expect("poisoned").get_or_insert(e);
        0.0
    };
    let lmax = lambdas.iter().copied().fold(1.0, f64::max);
    let breaks = geometric_breaks((1e-4 / lmax.sqrt()).min(1e-3), 1.0, 2.0);

    let head = integrate_shared(
        |s: f64| {
            let t = s * s;
            let ratio = sigma_over_s(s);
            match first_moment(t, s * ratio) {
                Ok(v) => v / ratio,
                Err(e) => record(e),
            }
        },
        |k, s, q: &f64| 2.0 * (-(1.0 + lambdas[k]) * s * s).exp() * q,
        lambdas.len(),
        0.0,
        1.0,
        &breaks,
        spec,
    );
    // |q(t)| ≤ g √(2/π) / σ(1) for t ≥ 1, so the tail beyond T is bounded in closed form
    let rate = 1.0 + lambdas.iter().copied().fold(f64::INFINITY, f64::min);
    let q_max = g_sup * (2.0 / PI).sqrt() / sigma_over_s(1.0);
    let budget = 0.01 * spec.abs_tol.max(1e-300);
    let t_end = 1.0 + ((q_max / (rate * budget)).ln() / rate).max(1.0);
    let tail_breaks: Vec<f64> = (1..).map(|j| 1.0 + 4.0 * j as f64 / rate).take_while(|t| *t < t_end).collect();
    let tail = integrate_shared(
        |t: f64| {
            let sigma = t.sqrt() * sigma_over_s(t.sqrt());
            match first_moment(t, sigma) {
                Ok(v) => v / sigma,
                Err(e) => record(e),
            }
        },
        |k, t, q: &f64| (-(1.0 + lambdas[k]) * t).exp() * q,
        lambdas.len(),
        1.0,
        t_end,
        &tail_breaks,
        spec,
    );
    let beyond: Vec<f64> = lambdas
        .iter()
        .map(|l| q_max * (-(1.0 + l) * t_end).exp() / (1.0 + l))
        .collect();
    if let Some(e) = failure.into_inner().expect("poisoned") {
        return Err(e);
    }
    let values = head.values.iter().zip(&tail.values).map(|(a, b)| a + b).collect();
    let errors = head
        .errors
        .iter()
        .zip(&tail.errors)
        .zip(&beyond)
        .map(|((a, b), c)| a + b + c)
        .collect();
    Ok((values, errors, head.converged && tail.converged))
}

/// `D_k u(x)` for `k = 1..m` and cylindrical `f`, returned with error
/// estimates and a convergence flag.
pub fn grad_resolvent_cylindrical(
    model: &OUModel,
    f: &CylindricalFn,
    x: &[f64],
    spec: &QuadratureSpec,
) -> Result<(Vec<f64>, Vec<f64>, bool)> {
    model.check_point(x)?;
    model.check_observable(f)?;
    spec.validate()?;
    cylindrical_gradient(model.lambdas(), f.direction(), f.profile(), x, true, spec)
}

/// With `polar`, the origin goes through the m-dimensional reduction;
/// otherwise every point uses the line moment along `d`, which is the same
/// quantity since `⟨d, c ∘ Z⟩` is a one-dimensional Gaussian.
fn cylindrical_gradient(
    lambdas: &[f64],
    d: &[f64],
    profile: &Profile,
    x: &[f64],
    polar: bool,
    spec: &QuadratureSpec,
) -> Result<(Vec<f64>, Vec<f64>, bool)> {
    let m = lambdas.len();
    if profile.is_constant() {
        return Ok((vec![0.0; m], vec![0.0; m], true));
    }
    let inner = QuadratureSpec {
        abs_tol: spec.abs_tol * 0.1,
        rel_tol: spec.rel_tol * 0.1,
        ..spec.regular()
    };
    let sigma_over_s = |s: f64| {
        let t = s * s;
        d.iter()
            .zip(lambdas)
            .map(|(dk, l)| dk * dk * one_minus_exp_ratio(2.0 * l * t))
            .sum::<f64>()
            .sqrt()
    };
    let at_origin = polar && x.iter().all(|v| *v == 0.0);
    let (values, errors, ok) = laplace_gradient_integrals(
        lambdas,
        &sigma_over_s,
        |t, sigma| {
            if at_origin {
                Ok(unit_integral(m, sigma, profile, &inner)?.value)
            } else {
                let a: f64 = (0..m).map(|k| d[k] * (-lambdas[k] * t).exp() * x[k]).sum();
                Ok(line_first_moment(profile, a, sigma, &inner)?.value)
            }
        },
        profile.sup_bound(),
        spec,
    )?;
    let values = values.iter().zip(d).map(|(v, dk)| v * dk).collect();
    let errors = errors.iter().zip(d).map(|(e, dk)| e * dk.abs()).collect();
    Ok((values, errors, ok))
}

/// `g_k = ⟨(−A)^{1/2} D R(1, L) f(0), e_k⟩`, scaled per the model's kernel
/// scale. Cylindrical observables with the quadrature method use the
/// reduction; otherwise each Monte-Carlo draw `Z` carries its own
/// deterministic time integral, so the standard error is exact.
pub fn sqrt_a_grad_resolvent_zero(model: &OUModel, f: &dyn Observable, method: &Method) -> Result<GradientVector> {
    model.check_observable(f)?;
    let m = model.m;
    let scale = model.kernel_scale;
    let rel = scale.relative_to_derived();
    match method {
        Method::Quadrature(spec) => {
            let cyl = f.as_cylindrical().ok_or_else(|| {
                Error::QuadratureUnavailable(
                    "quadrature for the resolvent gradient needs a cylindrical observable".into(),
                )
            })?;
            let (v, e, ok) = grad_resolvent_cylindrical(model, cyl, &vec![0.0; m], spec)?;
            let w: Vec<f64> = model.lambdas.iter().map(|l| rel * l.sqrt()).collect();
            let comps = v.iter().zip(&w).map(|(a, b)| a * b).collect();
            let errs = e.iter().zip(&w).map(|(a, b)| a * b).collect();
            Ok(GradientVector::new(comps, errs, MethodKind::Quadrature, scale, ok))
        }
        Method::MonteCarlo(cfg) => {
            let path_spec = QuadratureSpec::with_tolerances(1e-8, 1e-10);
            let lambdas = &model.lambdas;
            let est = mc_mean_vec(m, m, cfg, |z, out| {
                // per draw: √λ_k ∫₀^∞ e^{−t} e^{−λ_k t} c_k(t)^{−1} z_k f(c(t)z) dt
                let fz = |t: f64| {
                    let y: Vec<f64> = lambdas.iter().zip(z).map(|(l, zi)| cov_scalar(*l, t) * zi).collect();
                    f.eval(&y)
                };
                for k in 0..m {
                    let l = lambdas[k];
                    let head = integrate(
                        |s| {
                            let t = s * s;
                            2.0 * (-(1.0 + l) * t).exp() / one_minus_exp_ratio(2.0 * l * t).sqrt() * fz(t)
                        },
                        0.0,
                        1.0,
                        &path_spec,
                    );
                    let tail = integrate(
                        |t| (-(1.0 + l) * t).exp() / cov_scalar(l, t) * fz(t),
                        1.0,
                        f64::INFINITY,
                        &path_spec,
                    );
                    let path = match (head, tail) {
                        (Ok(a), Ok(b)) => a.value + b.value,
                        _ => f64::NAN,
                    };
                    out[k] = rel * l.sqrt() * z[k] * path;
                }
            });
            let comps: Vec<f64> = est.iter().map(|e| e.mean).collect();
            let errs: Vec<f64> = est.iter().map(|e| e.std_error).collect();
            let ok = comps.iter().all(|v| v.is_finite());
            Ok(GradientVector::new(comps, errs, MethodKind::MonteCarlo, scale, ok))
        }
    }
}

/// Largest `√λ |D R(1, M) f(x)|` over `grid`, with the error estimate at the
/// maximizer. Only constant spectra `λ_k ≡ λ` are accepted.
pub fn scalar_grad_sup(model: &OUModel, f: &CylindricalFn, grid: &[Vec<f64>], spec: &QuadratureSpec) -> Result<(f64, f64)> {
    if !model.spectrum.is_constant() {
        return Err(Error::UnsupportedSpectrum(
            "the scalar gradient bound applies to constant spectra only".into(),
        ));
    }
    let lambda = model.lambdas[0];
    let mut best = (0.0, 0.0);
    spec.validate()?;
    model.check_observable(f)?;
    for x in grid {
        model.check_point(x)?;
        let (v, e, ok) = cylindrical_gradient(model.lambdas(), f.direction(), f.profile(), x, false, spec)?;
        if !ok {
            return Err(Error::QuadratureUnavailable(format!(
                "gradient quadrature did not converge at x = {x:?}"
            )));
        }
        let norm = v.iter().map(|g| g * g).sum::<f64>().sqrt();
        let err = e.iter().map(|g| g * g).sum::<f64>().sqrt();
        let value = lambda.sqrt() * norm;
        if value > best.0 {
            best = (value, lambda.sqrt() * err);
        }
    }
    Ok(best)
}
