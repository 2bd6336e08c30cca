//! Vector-valued panel quadrature on a shared, adaptively refined grid.
//!
//! Many integrals in this crate share one expensive factor (for instance
//! `|c(t)|`, an `O(m)` sum) and differ only in a cheap per-index factor.
//! The shared factor is evaluated once per node and reused for every
//! output component; refinement is driven by whichever component is
//! currently worst.

use rayon::prelude::*;

use super::quad::{rescale_error, QuadratureSpec, WG, WGK, XGK};

#[derive(Debug, Clone, PartialEq)]
pub struct VectorQuad {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub converged: bool,
    pub panels: usize,
}

struct PanelData {
    lo: f64,
    hi: f64,
    values: Vec<f64>,
    errors: Vec<f64>,
}

/// Node `i` of the 21-point rule on `[lo, hi]`: index 0 is the centre,
/// `2j + 1` and `2j + 2` are `centre ∓ half·XGK[j]`.
fn nodes(lo: f64, hi: f64) -> [f64; 21] {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut out = [center; 21];
    for j in 0..10 {
        out[2 * j + 1] = center - half * XGK[j];
        out[2 * j + 2] = center + half * XGK[j];
    }
    out
}

fn eval_panel<T, S, K>(shared: &S, kernel: &K, n_out: usize, lo: f64, hi: f64) -> PanelData
where
    S: Fn(f64) -> T,
    K: Fn(usize, f64, &T) -> f64,
{
    let xs = nodes(lo, hi);
    let sv: Vec<T> = xs.iter().map(|&x| shared(x)).collect();
    let half = 0.5 * (hi - lo);
    let mut values = Vec::with_capacity(n_out);
    let mut errors = Vec::with_capacity(n_out);
    let mut fv = [0.0; 21];
    for k in 0..n_out {
        for i in 0..21 {
            fv[i] = kernel(k, xs[i], &sv[i]);
        }
        let mut res_k = WGK[10] * fv[0];
        let mut res_g = 0.0;
        let mut res_abs = (WGK[10] * fv[0]).abs();
        for j in 0..10 {
            let (f1, f2) = (fv[2 * j + 1], fv[2 * j + 2]);
            res_k += WGK[j] * (f1 + f2);
            res_abs += WGK[j] * (f1.abs() + f2.abs());
            if j % 2 == 1 {
                res_g += WG[j / 2] * (f1 + f2);
            }
        }
        let mean = 0.5 * res_k;
        let mut res_asc = WGK[10] * (fv[0] - mean).abs();
        for j in 0..10 {
            res_asc += WGK[j] * ((fv[2 * j + 1] - mean).abs() + (fv[2 * j + 2] - mean).abs());
        }
        values.push(res_k * half);
        errors.push(rescale_error(
            (res_k - res_g) * half,
            res_abs * half,
            res_asc * half,
        ));
    }
    PanelData {
        lo,
        hi,
        values,
        errors,
    }
}

/// Integrates `kernel(k, x, &shared(x))` over `[a, b]` for `k in 0..n_out`.
///
/// `breaks` seeds the initial panels (points outside `(a, b)` are ignored).
/// Each component converges when its error estimate is within
/// `spec.tolerance_for(value)`; `max_subdivisions` caps the panel count.
/// Endpoint flags in `spec` are ignored: callers remove singularities by
/// substitution before handing the integrand over.
pub fn integrate_shared<T, S, K>(
    shared: S,
    kernel: K,
    n_out: usize,
    a: f64,
    b: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> VectorQuad
where
    T: Send,
    S: Fn(f64) -> T + Sync,
    K: Fn(usize, f64, &T) -> f64 + Sync,
{
    let mut cuts: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|x| *x > a && *x < b))
        .chain(std::iter::once(b))
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut panels: Vec<PanelData> = cuts
        .par_windows(2)
        .map(|w| eval_panel(&shared, &kernel, n_out, w[0], w[1]))
        .collect();

    let mut converged = false;
    loop {
        let mut totals = vec![0.0; n_out];
        let mut errs = vec![0.0; n_out];
        for p in &panels {
            for k in 0..n_out {
                totals[k] += p.values[k];
                errs[k] += p.errors[k];
            }
        }
        let mut marked = vec![false; panels.len()];
        let mut any = false;
        for k in 0..n_out {
            if errs[k] <= spec.tolerance_for(totals[k]) {
                continue;
            }
            any = true;
            let worst = panels
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.errors[k].total_cmp(&y.1.errors[k]))
                .map(|(i, _)| i)
                .unwrap_or(0);
            marked[worst] = true;
        }
        if !any {
            converged = true;
            break;
        }
        let n_marked = marked.iter().filter(|m| **m).count();
        if panels.len() + n_marked > spec.max_subdivisions {
            break;
        }
        let too_narrow = panels.iter().zip(&marked).any(|(p, &m)| {
            let mid = 0.5 * (p.lo + p.hi);
            m && !(mid > p.lo && mid < p.hi)
        });
        if too_narrow {
            break;
        }
        let halves: Vec<(f64, f64)> = panels
            .iter()
            .zip(&marked)
            .filter(|(_, m)| **m)
            .flat_map(|(p, _)| {
                let mid = 0.5 * (p.lo + p.hi);
                [(p.lo, mid), (mid, p.hi)]
            })
            .collect();
        let fresh: Vec<PanelData> = halves
            .par_iter()
            .map(|&(lo, hi)| eval_panel(&shared, &kernel, n_out, lo, hi))
            .collect();
        let mut next: Vec<PanelData> = panels
            .into_iter()
            .zip(marked)
            .filter(|(_, m)| !*m)
            .map(|(p, _)| p)
            .chain(fresh)
            .collect();
        next.sort_by(|x, y| x.lo.total_cmp(&y.lo));
        panels = next;
    }

    let mut values = vec![0.0; n_out];
    let mut errors = vec![0.0; n_out];
    for p in &panels {
        for k in 0..n_out {
            values[k] += p.values[k];
            errors[k] += p.errors[k];
        }
    }
    VectorQuad {
        values,
        errors,
        converged,
        panels: panels.len(),
    }
}

/// Geometric breakpoints `top · ratio^{-j}` down to `bottom`, ascending.
pub fn geometric_breaks(bottom: f64, top: f64, ratio: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut x = top;
    while x > bottom {
        out.push(x);
        x /= ratio;
    }
    out.push(bottom);
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_scalar_integrals() {
        let spec = QuadratureSpec::default();
        // shared factor e^{-x}, component k multiplies by x^k
        let r = integrate_shared(
            |x: f64| (-x).exp(),
            |k, x, e: &f64| x.powi(k as i32) * e,
            4,
            0.0,
            30.0,
            &geometric_breaks(1e-3, 30.0, 2.0),
            &spec,
        );
        assert!(r.converged);
        // ∫₀^30 x^k e^{-x} dx ≈ k! (tail below 1e-9)
        for (k, exact) in [1.0, 1.0, 2.0, 6.0].iter().enumerate() {
            assert!((r.values[k] - exact).abs() < 1e-8, "k={k}: {}", r.values[k]);
        }
    }

    #[test]
    fn concentrated_components_refine() {
        let spec = QuadratureSpec::default();
        let scales: [f64; 4] = [1.0, 1e2, 1e4, 1e6];
        let r = integrate_shared(
            |_x: f64| (),
            |k, x, _: &()| {
                let l = scales[k];
                2.0 * l.sqrt() * (-l * x * x).exp()
            },
            scales.len(),
            0.0,
            10.0,
            &[],
            &spec,
        );
        assert!(r.converged);
        for v in r.values {
            assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-9, "{v}");
        }
    }

    #[test]
    fn geometric_breaks_are_ascending() {
        let b = geometric_breaks(1e-3, 1.0, 2.0);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*b.first().unwrap(), 1e-3);
        assert_eq!(*b.last().unwrap(), 1.0);
    }
}
