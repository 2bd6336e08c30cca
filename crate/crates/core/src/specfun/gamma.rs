use crate::error::{Error, Result};

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

// B_{2j} / (2j (2j - 1)) for j = 1..=8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Arguments below this are shifted upward by the recurrence before the
/// Stirling series is applied.
const STIRLING_MIN: f64 = 15.0;

/// Natural logarithm of the gamma function for `x > 0`.
///
/// Stirling series with Bernoulli corrections for `x >= 15`, and the
/// recurrence `Γ(x+1) = xΓ(x)` to reach that range from below.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    let mut shift = 0.0;
    let mut z = x;
    let mut prod = 1.0;
    while z < STIRLING_MIN {
        prod *= z;
        z += 1.0;
        // keep the running product well inside the f64 range
        if prod > 1e280 {
            shift += prod.ln();
            prod = 1.0;
        }
    }
    shift += prod.ln();
    Ok(stirling(z) - shift)
}

fn stirling(z: f64) -> f64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for coef in STIRLING {
        series += coef * pow;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_TWO_PI + series
}

/// `ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a + b)`.
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!(
            "log_beta requires positive arguments, got ({a}, {b})"
        )));
    }
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}

/// Log of `∫₀^∞ e^{−ρ²/2} ρ^m dρ = Γ((m+1)/2) 2^{(m−1)/2}`.
pub fn log_gaussian_radial_moment(m: u32) -> f64 {
    let m = f64::from(m);
    // (m + 1) / 2 >= 1/2 so log_gamma cannot fail here
    log_gamma(0.5 * (m + 1.0)).expect("positive argument") + 0.5 * (m - 1.0) * std::f64::consts::LN_2
}

/// `∫₀^∞ e^{−ρ²/2} ρ^m dρ`. Overflows to infinity for very large `m`; use
/// [`log_gaussian_radial_moment`] beyond `m ≈ 100`.
pub fn gaussian_radial_moment(m: u32) -> f64 {
    log_gaussian_radial_moment(m).exp()
}
