//! Cross-checks run by `oulab verify`.

use crate::error::Result;
use crate::gaussian::RngStream;
use crate::oracle::{fd_gradient, mc_gaussian_integral_mk, mc_mean, pde_residual, McConfig};
use crate::ousolver::{grad_semigroup, resolvent_apply, sqrt_a_grad_resolvent_zero, Method, OUModel};
use crate::reduction::{odd_reduce, radial_reduce, sign_closed_form, ReductionTask};
use crate::specfun::QuadratureSpec;
use crate::spectrum::Spectrum;
use crate::testfn::{make_smooth_step, CylindricalFn, HermiteSpline, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Lemmas,
    Gradient,
    Pde,
    All,
}

impl std::str::FromStr for Level {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "lemmas" => Ok(Level::Lemmas),
            "gradient" => Ok(Level::Gradient),
            "pde" => Ok(Level::Pde),
            "all" => Ok(Level::All),
            other => Err(crate::error::Error::Parse(format!(
                "unknown level {other:?} (expected lemmas, gradient, pde or all)"
            ))),
        }
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Level::Lemmas => "lemmas",
            Level::Gradient => "gradient",
            Level::Pde => "pde",
            Level::All => "all",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, reference: f64, tolerance: f64) -> Self {
        let pass = (value - reference).abs() <= tolerance;
        Self {
            name: name.into(),
            value,
            reference,
            tolerance,
            pass,
        }
    }
}

fn random_direction(rng: RngStream, m: usize) -> Vec<f64> {
    let mut n = rng.normals(0);
    (0..m).map(|_| n.next_normal()).collect()
}

fn lemmas(seed: u64, spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let base = RngStream::new(seed, 100);
    for (i, m) in [2usize, 3, 5, 10, 50].into_iter().enumerate() {
        let c = random_direction(base.substream(100 + i as u64), m);
        let k = 1 + i % m;
        let t = ReductionTask::new(k, c.clone(), Profile::Sign)?;
        let got = odd_reduce(&t, spec)?.value;
        out.push(Check::new(format!("sign closed form m={m} k={k}"), got, sign_closed_form(&c, k)?, 1e-8));
    }
    for (i, m) in [2usize, 3, 6].into_iter().enumerate() {
        let c = random_direction(base.substream(200 + i as u64), m);
        let t = ReductionTask::new(1, c, make_smooth_step(5)?)?;
        let a = radial_reduce(&t, spec)?;
        let b = odd_reduce(&t, spec)?;
        let tol = a.error_estimate + b.error_estimate + 10.0 * spec.abs_tol;
        out.push(Check::new(format!("half-range vs full reduction m={m}"), b.value, a.value, tol));
    }
    let spline = Profile::Spline(HermiteSpline::new(vec![-2.0, -0.5, 0.3, 1.5], vec![0.2, -0.9, 0.6, 1.0])?);
    for (i, (profile, m)) in [(spline, 3usize), (make_smooth_step(2)?.dilated(0.5), 4)].into_iter().enumerate() {
        let c = random_direction(base.substream(300 + i as u64), m);
        let t = ReductionTask::new(m, c.clone(), profile.clone())?;
        let q = radial_reduce(&t, spec)?.value;
        let cfg = McConfig::new(400_000, base.substream(400 + i as u64)).antithetic(true);
        let mc = mc_gaussian_integral_mk(&profile, &c, m, &cfg)?;
        out.push(Check::new(format!("reduction vs Monte Carlo m={m} ({profile})"), mc.mean, q, 3.0 * mc.std_error));
    }
    // the component of x orthogonal to c carries no mass
    let c = [1.0, -2.0, 0.5];
    let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    let u: Vec<f64> = c.iter().map(|v| v / norm).collect();
    let cfg = McConfig::new(400_000, base.substream(500));
    let ortho = mc_mean(3, &cfg, |x| {
        let s: f64 = x.iter().zip(&u).map(|(a, b)| a * b).sum();
        Profile::Tanh.eval(norm * s) * (x[0] - s * u[0])
    });
    out.push(Check::new("orthogonal component vanishes m=3", ortho.mean, 0.0, 3.0 * ortho.std_error));
    Ok(out)
}

fn gradient(seed: u64, spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let tight = Method::Quadrature(QuadratureSpec::with_tolerances(1e-12, 1e-14));
    let quad = Method::Quadrature(spec.clone());
    let base = RngStream::new(seed, 600);
    for m in 1..=3usize {
        let model = OUModel::new(m, Spectrum::quadratic(1.0)?)?;
        let d = random_direction(base.substream(m as u64), m);
        let x = random_direction(base.substream(10 + m as u64), m);
        let h = random_direction(base.substream(20 + m as u64), m);
        let f = CylindricalFn::new(Profile::Tanh, d)?;
        let g = grad_semigroup(&model, &f, 0.5, &x, &h, &quad)?.value();
        let fd = fd_gradient(
            |y| crate::ousolver::semigroup_apply(&model, &f, 0.5, y, &tight).map(|e| e.value()).unwrap_or(f64::NAN),
            &x,
            &h,
            1e-4,
        )?;
        let rel = if m == 1 { 1e-6 } else { 1e-3 };
        out.push(Check::new(format!("gradient formula vs finite differences m={m}"), g, fd, rel * fd.abs().max(1e-3)));
        let cfg = McConfig::new(400_000, base.substream(30 + m as u64));
        let mc = grad_semigroup(&model, &f, 0.5, &x, &h, &Method::MonteCarlo(cfg))?;
        out.push(Check::new(
            format!("Monte-Carlo gradient vs finite differences m={m}"),
            mc.value(),
            fd,
            3.0 * mc.error() + 1e-3 * fd.abs(),
        ));
    }
    for lambda in [1.0, 4.0] {
        let model = OUModel::new(1, Spectrum::constant(lambda)?)?;
        let f = CylindricalFn::summed(Profile::Tanh, 1)?;
        let g = sqrt_a_grad_resolvent_zero(&model, &f, &quad)?.components[0];
        let fd = fd_gradient(
            |y| resolvent_apply(&model, &f, y, &tight).map(|e| e.value()).unwrap_or(f64::NAN),
            &[0.0],
            &[1.0],
            1e-4,
        )?;
        out.push(Check::new(
            format!("resolvent gradient scale vs finite differences lambda={lambda}"),
            g,
            lambda.sqrt() * fd,
            1e-3 * g.abs(),
        ));
    }
    Ok(out)
}

fn pde(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let grid: Vec<Vec<f64>> = (0..=40).map(|i| vec![-2.0 + 0.1 * i as f64]).collect();
    let tight = Method::Quadrature(QuadratureSpec {
        rel_tol: spec.rel_tol.min(1e-12),
        abs_tol: spec.abs_tol.min(1e-14),
        ..spec.clone()
    });
    let mut out = Vec::new();
    for lambda in [1.0, 4.0] {
        let s = Spectrum::constant(lambda)?;
        let model = OUModel::new(1, s.clone())?;
        let f = CylindricalFn::summed(Profile::Tanh, 1)?;
        let u = |x: &[f64]| resolvent_apply(&model, &f, x, &tight).map(|e| e.value()).unwrap_or(f64::NAN);
        let r = pde_residual(u, |x| x[0].tanh(), &s, &grid, 1e-3)?;
        out.push(Check::new(format!("elliptic residual tanh lambda={lambda}"), r, 0.0, 1e-3));
    }
    Ok(out)
}

pub fn run(level: Level, seed: u64, spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    if matches!(level, Level::Lemmas | Level::All) {
        out.extend(lemmas(seed, spec)?);
    }
    if matches!(level, Level::Gradient | Level::All) {
        out.extend(gradient(seed, spec)?);
    }
    if matches!(level, Level::Pde | Level::All) {
        out.extend(pde(spec)?);
    }
    Ok(out)
}
