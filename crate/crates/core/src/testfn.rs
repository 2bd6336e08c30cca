//! Bounded one-dimensional profiles `F` and cylindrical functions
//! `f(x) = F(⟨c, x⟩)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Measurable,
    C2,
}

/// Piecewise cubic Hermite interpolant with zero slopes at the knots.
///
/// Each piece is monotone between its end values, so the interpolant never
/// leaves `[min y, max y]`. Constant extension outside the knot range.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl HermiteSpline {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != values.len() {
            return Err(Error::Domain(
                "spline needs at least two knots and one value per knot".into(),
            ));
        }
        if knots.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("spline knots must be strictly increasing".into()));
        }
        if values.iter().chain(&knots).any(|v| !v.is_finite()) {
            return Err(Error::Domain("spline data must be finite".into()));
        }
        Ok(Self { knots, values })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.knots.len();
        if x <= self.knots[0] {
            return self.values[0];
        }
        if x >= self.knots[n - 1] {
            return self.values[n - 1];
        }
        let i = self.knots.partition_point(|k| *k <= x) - 1;
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let u = (x - x0) / (x1 - x0);
        y0 + (y1 - y0) * u * u * (3.0 - 2.0 * u)
    }

    fn sup(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }
}

/// A bounded scalar profile.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// `+1` on `(0, ∞)`, `−1` on `(−∞, 0)`, `0` at the origin.
    Sign,
    /// Odd, non-decreasing, `C²`; `0` on `[0, 1/(n+1)]` and `1` on `[1/n, ∞)`.
    SmoothStep { n: u32 },
    Tanh,
    Sin,
    Constant(f64),
    Spline(HermiteSpline),
    /// `factor · inner(x)`
    Scaled { factor: f64, inner: Box<Profile> },
    /// `inner(factor · x)`
    Dilated { factor: f64, inner: Box<Profile> },
}

/// Quintic smoothstep `6u⁵ − 15u⁴ + 10u³`, clamped to `[0, 1]`.
#[inline]
fn smoothstep(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
    }
}

pub fn make_smooth_step(n: u32) -> Result<Profile> {
    if n == 0 {
        return Err(Error::Domain("smooth step index n must be at least 1".into()));
    }
    Ok(Profile::SmoothStep { n })
}

impl Profile {
    pub fn scaled(self, factor: f64) -> Self {
        Profile::Scaled {
            factor,
            inner: Box::new(self),
        }
    }

    pub fn dilated(self, factor: f64) -> Self {
        Profile::Dilated {
            factor,
            inner: Box::new(self),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Profile::Sign => {
                if x > 0.0 {
                    1.0
                } else if x < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            Profile::SmoothStep { n } => {
                let lo = 1.0 / (f64::from(*n) + 1.0);
                let hi = 1.0 / f64::from(*n);
                let y = smoothstep((x.abs() - lo) / (hi - lo));
                if x < 0.0 {
                    -y
                } else {
                    y
                }
            }
            Profile::Tanh => x.tanh(),
            Profile::Sin => x.sin(),
            Profile::Constant(v) => *v,
            Profile::Spline(s) => s.eval(x),
            Profile::Scaled { factor, inner } => factor * inner.eval(x),
            Profile::Dilated { factor, inner } => inner.eval(factor * x),
        }
    }

    pub fn sup_bound(&self) -> f64 {
        match self {
            Profile::Sign | Profile::SmoothStep { .. } | Profile::Tanh | Profile::Sin => 1.0,
            Profile::Constant(v) => v.abs(),
            Profile::Spline(s) => s.sup(),
            Profile::Scaled { factor, inner } => factor.abs() * inner.sup_bound(),
            Profile::Dilated { inner, .. } => inner.sup_bound(),
        }
    }

    pub fn is_odd(&self) -> bool {
        match self {
            Profile::Sign | Profile::SmoothStep { .. } | Profile::Tanh | Profile::Sin => true,
            Profile::Constant(v) => *v == 0.0,
            Profile::Spline(_) => false,
            Profile::Scaled { inner, .. } | Profile::Dilated { inner, .. } => inner.is_odd(),
        }
    }

    pub fn smoothness(&self) -> Smoothness {
        match self {
            Profile::Sign | Profile::Spline(_) => Smoothness::Measurable,
            Profile::SmoothStep { .. } | Profile::Tanh | Profile::Sin | Profile::Constant(_) => {
                Smoothness::C2
            }
            Profile::Scaled { inner, .. } | Profile::Dilated { inner, .. } => inner.smoothness(),
        }
    }

    /// Points where the profile is not analytic; quadratures split there.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Profile::Sign => vec![0.0],
            Profile::SmoothStep { n } => {
                let lo = 1.0 / (f64::from(*n) + 1.0);
                let hi = 1.0 / f64::from(*n);
                vec![-hi, -lo, lo, hi]
            }
            Profile::Tanh | Profile::Sin | Profile::Constant(_) => Vec::new(),
            Profile::Spline(s) => s.knots().to_vec(),
            Profile::Scaled { inner, .. } => inner.breakpoints(),
            Profile::Dilated { factor, inner } => {
                if *factor == 0.0 {
                    Vec::new()
                } else {
                    inner.breakpoints().into_iter().map(|b| b / factor).collect()
                }
            }
        }
    }

    /// Identically zero (up to its description).
    pub fn is_zero(&self) -> bool {
        match self {
            Profile::Constant(v) => *v == 0.0,
            Profile::Scaled { factor, inner } => *factor == 0.0 || inner.is_zero(),
            Profile::Dilated { inner, .. } => inner.is_zero(),
            _ => false,
        }
    }

    /// Constant everywhere (so every gradient vanishes).
    pub fn is_constant(&self) -> bool {
        match self {
            Profile::Constant(_) => true,
            Profile::Scaled { factor, inner } => *factor == 0.0 || inner.is_constant(),
            Profile::Dilated { factor, inner } => *factor == 0.0 || inner.is_constant(),
            _ => false,
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Sign => write!(f, "sign"),
            Profile::SmoothStep { n } => write!(f, "step:n={n}"),
            Profile::Tanh => write!(f, "tanh"),
            Profile::Sin => write!(f, "sin"),
            Profile::Constant(v) if *v == 1.0 => write!(f, "one"),
            Profile::Constant(v) => write!(f, "const:value={v}"),
            Profile::Spline(s) => write!(f, "spline:knots={}", s.knots().len()),
            Profile::Scaled { factor, inner } => write!(f, "{factor}*{inner}"),
            Profile::Dilated { factor, inner } => write!(f, "{inner}({factor}x)"),
        }
    }
}

/// Parses `sign`, `step:n=<k>`, `sin`, `tanh`, `one`, `const:value=<v>`.
impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let param = |key: &str| -> Result<&str> {
            rest.split(',')
                .filter_map(|p| p.split_once('='))
                .find(|(k, _)| k.trim() == key)
                .map(|(_, v)| v.trim())
                .ok_or_else(|| Error::Parse(format!("profile {s:?} needs {key}=<value>")))
        };
        match name {
            "sign" => Ok(Profile::Sign),
            "tanh" => Ok(Profile::Tanh),
            "sin" => Ok(Profile::Sin),
            "one" => Ok(Profile::Constant(1.0)),
            "step" => {
                let n: u32 = param("n")?
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad step index in {s:?}")))?;
                make_smooth_step(n)
            }
            "const" => {
                let v: f64 = param("value")?
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad constant in {s:?}")))?;
                Ok(Profile::Constant(v))
            }
            _ => Err(Error::Parse(format!(
                "unknown profile {s:?} (expected sign, step:n=<k>, sin, tanh, one, const:value=<v>)"
            ))),
        }
    }
}

/// `f(x) = F(⟨c, x⟩)` on `R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CylindricalFn {
    profile: Profile,
    direction: Vec<f64>,
}

impl CylindricalFn {
    pub fn new(profile: Profile, direction: Vec<f64>) -> Result<Self> {
        if direction.is_empty() {
            return Err(Error::Domain("direction must have dimension at least 1".into()));
        }
        if direction.iter().any(|c| !c.is_finite()) || direction.iter().all(|c| *c == 0.0) {
            return Err(Error::Domain("direction must be a finite nonzero vector".into()));
        }
        Ok(Self { profile, direction })
    }

    /// `F(x_1 + … + x_m)`.
    pub fn summed(profile: Profile, m: usize) -> Result<Self> {
        Self::new(profile, vec![1.0; m])
    }

    /// `F(x_1)` in `R^m`.
    pub fn first_coordinate(profile: Profile, m: usize) -> Result<Self> {
        let mut d = vec![0.0; m];
        if let Some(first) = d.first_mut() {
            *first = 1.0;
        }
        Self::new(profile, d)
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    pub fn sup_bound(&self) -> f64 {
        self.profile.sup_bound()
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        let s: f64 = self.direction.iter().zip(x).map(|(c, x)| c * x).sum();
        self.profile.eval(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> impl Iterator<Item = f64> {
        (-4000..=4000).map(|i| i as f64 * 1e-3)
    }

    #[test]
    fn smooth_step_plateaus() {
        for n in [1u32, 5, 100] {
            let f = make_smooth_step(n).unwrap();
            let lo = 1.0 / (f64::from(n) + 1.0);
            let hi = 1.0 / f64::from(n);
            assert_eq!(f.eval(lo), 0.0);
            assert_eq!(f.eval(hi), 1.0);
            assert_eq!(f.eval(0.5 * lo), 0.0);
            assert_eq!(f.eval(2.0 * hi), 1.0);
            assert_eq!(f.eval(-hi), -1.0);
        }
        assert!(make_smooth_step(0).is_err());
    }

    #[test]
    fn smooth_step_is_odd_and_monotone() {
        let f = make_smooth_step(3).unwrap();
        let mut state = 0x2545_f491_4f6c_dd1du64;
        for _ in 0..1000 {
            // xorshift, enough for test inputs
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let x = (state as f64 / u64::MAX as f64 - 0.5) * 4.0;
            assert_eq!(f.eval(-x), -f.eval(x));
        }
        let mut prev = f64::NEG_INFINITY;
        for x in grid() {
            let v = f.eval(x);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn monotone_in_n_on_positive_axis() {
        for n in 1..30u32 {
            let a = make_smooth_step(n).unwrap();
            let b = make_smooth_step(n + 1).unwrap();
            for i in 0..=20_000 {
                let x = i as f64 * 1e-4;
                assert!(a.eval(x) <= b.eval(x), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn pointwise_convergence_to_sign() {
        for n in [1u32, 10, 256] {
            let f = make_smooth_step(n).unwrap();
            for x in grid().filter(|x| x.abs() >= 1.0 / f64::from(n)) {
                assert_eq!(f.eval(x), Profile::Sign.eval(x));
            }
        }
    }

    #[test]
    fn second_derivative_continuous_at_knots() {
        for n in [1u32, 4] {
            let f = make_smooth_step(n).unwrap();
            let lo = 1.0 / (f64::from(n) + 1.0);
            let hi = 1.0 / f64::from(n);
            let width = hi - lo;
            let h = 1e-5 * width;
            let d2 = |x: f64| (f.eval(x + h) - 2.0 * f.eval(x) + f.eval(x - h)) / (h * h);
            // one-sided limits by linear extrapolation from stencils that
            // stay on one side of the knot
            let one_sided = |knot: f64, side: f64| {
                let d = 3.0 * h * side;
                2.0 * d2(knot + d) - d2(knot + 2.0 * d)
            };
            let scale = 60.0 / (width * width);
            for knot in [-hi, -lo, lo, hi] {
                let jump = one_sided(knot, 1.0) - one_sided(knot, -1.0);
                assert!(jump.abs() <= 1e-6 * scale, "knot {knot}: jump {jump:e}");
            }
        }
    }

    #[test]
    fn sup_bounds_hold_on_grid() {
        let spline =
            HermiteSpline::new(vec![-2.0, -0.5, 0.3, 1.7], vec![0.2, -0.9, 1.0, -0.4]).unwrap();
        let profiles = [
            Profile::Sign,
            make_smooth_step(2).unwrap(),
            Profile::Tanh,
            Profile::Sin,
            Profile::Constant(1.0),
            Profile::Spline(spline),
        ];
        for p in &profiles {
            assert!(p.sup_bound() <= 1.0);
            for x in grid() {
                assert!(p.eval(x).abs() <= p.sup_bound() + 1e-15, "{p} at {x}");
                if p.is_odd() && x != 0.0 {
                    assert_eq!(p.eval(-x), -p.eval(x));
                }
            }
        }
    }

    #[test]
    fn sign_profile_values() {
        assert_eq!(Profile::Sign.eval(0.0), 0.0);
        assert_eq!(Profile::Sign.eval(1e-300), 1.0);
        assert_eq!(Profile::Sign.eval(-3.0), -1.0);
    }

    #[test]
    fn cylindrical_examples() {
        let f = CylindricalFn::new(Profile::Sign, vec![1.0, 1.0]).unwrap();
        assert_eq!(f.eval(&[0.3, -0.1]).unwrap(), 1.0);
        assert_eq!(f.eval(&[0.25, -0.25]).unwrap(), 0.0);
        assert!(f.eval(&[1.0]).is_err());
        let g = CylindricalFn::summed(make_smooth_step(1).unwrap(), 3).unwrap();
        assert_eq!(g.eval(&[1.0, 0.0, 0.0]).unwrap(), 1.0);
        assert!(CylindricalFn::new(Profile::Sign, vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["sign", "step:n=4", "tanh", "sin", "one"] {
            let p: Profile = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!("step".parse::<Profile>().is_err());
        assert!("step:n=0".parse::<Profile>().is_err());
        assert!("cosh".parse::<Profile>().is_err());
    }

    #[test]
    fn combinators() {
        let p = Profile::Sign.scaled(-1.0);
        assert_eq!(p.eval(2.0), -1.0);
        assert!(p.is_odd());
        let d = make_smooth_step(1).unwrap().dilated(2.0);
        assert_eq!(d.eval(0.5), 1.0);
        assert_eq!(d.breakpoints(), vec![-0.5, -0.25, 0.25, 0.5]);
    }
}
