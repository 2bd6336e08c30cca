//! Special functions and quadrature engines.

mod gamma;
mod panels;
mod quad;

pub use gamma::{gaussian_radial_moment, log_beta, log_gamma, log_gaussian_radial_moment};
pub use panels::{geometric_breaks, integrate_shared, VectorQuad};
pub use quad::{integrate, integrate_with_breaks, Endpoint, QuadResult, QuadratureSpec};

/// `1 − e^{−x}` without cancellation for small `|x|`.
#[inline]
pub fn one_minus_exp(x: f64) -> f64 {
    if x.abs() < 1e-5 {
        x * (1.0 - x * (0.5 - x * (1.0 / 6.0 - x / 24.0)))
    } else {
        -(-x).exp_m1()
    }
}

/// `(1 − e^{−x}) / x`, continuous at `x = 0` where it equals 1.
#[inline]
pub fn one_minus_exp_ratio(x: f64) -> f64 {
    if x.abs() < 1e-5 {
        1.0 - x * (0.5 - x * (1.0 / 6.0 - x / 24.0))
    } else {
        -(-x).exp_m1() / x
    }
}
