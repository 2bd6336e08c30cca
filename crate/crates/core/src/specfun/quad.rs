//! Adaptive Gauss–Kronrod quadrature with endpoint-singularity and
//! semi-infinite-interval transforms.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
pub(crate) const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];

pub(crate) const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

// Gauss weights for the odd-indexed Kronrod abscissae XGK[1], XGK[3], ...
pub(crate) const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

/// Behaviour of the integrand at one endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Endpoint {
    #[default]
    Regular,
    /// The integrand behaves like `|t − endpoint|^alpha`, `alpha > -1`.
    Algebraic(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub lower: Endpoint,
    pub upper: Endpoint,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 2000,
            lower: Endpoint::Regular,
            upper: Endpoint::Regular,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn singular_lower(mut self, alpha: f64) -> Self {
        self.lower = Endpoint::Algebraic(alpha);
        self
    }

    pub fn singular_upper(mut self, alpha: f64) -> Self {
        self.upper = Endpoint::Algebraic(alpha);
        self
    }

    /// Same tolerances, both endpoints regular.
    pub fn regular(&self) -> Self {
        Self {
            lower: Endpoint::Regular,
            upper: Endpoint::Regular,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::InvalidQuadrature(format!(
                "tolerances must be positive (rel_tol = {}, abs_tol = {})",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidQuadrature(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        for end in [self.lower, self.upper] {
            if let Endpoint::Algebraic(alpha) = end {
                if !(alpha > -1.0) || !alpha.is_finite() {
                    return Err(Error::InvalidQuadrature(format!(
                        "algebraic exponent must exceed -1, got {alpha}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

impl QuadResult {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            error_estimate: 0.0,
            converged: true,
        }
    }

    pub fn scale(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            converged: self.converged,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    /// t = a + s^p
    PowerLower { a: f64, p: f64 },
    /// t = b − s^p
    PowerUpper { b: f64, p: f64 },
    /// t = a − ln(1 − u), u ∈ (0, 1)
    ExpTail { a: f64 },
}

impl Map {
    #[inline]
    fn apply(self, s: f64) -> (f64, f64) {
        match self {
            Map::Identity => (s, 1.0),
            Map::PowerLower { a, p } => (a + s.powf(p), p * s.powf(p - 1.0)),
            Map::PowerUpper { b, p } => (b - s.powf(p), p * s.powf(p - 1.0)),
            Map::ExpTail { a } => {
                let one_minus = 1.0 - s;
                (a - (-s).ln_1p(), 1.0 / one_minus)
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    map: Map,
    lo: f64,
    hi: f64,
}

impl Piece {
    fn identity(lo: f64, hi: f64) -> Self {
        Self {
            map: Map::Identity,
            lo,
            hi,
        }
    }
}

/// Result of a single Gauss–Kronrod panel.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Panel {
    pub value: f64,
    pub error: f64,
}

/// 21-point Kronrod rule on `[lo, hi]` with the QUADPACK error heuristic.
pub(crate) fn gk21<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let error = rescale_error((res_k - res_g) * half, res_abs, res_asc);
    Panel { value, error }
}

pub(crate) fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

struct Item {
    piece: usize,
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Item {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Item {}
impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, pieces: &[Piece], spec: &QuadratureSpec) -> QuadResult {
    let eval = |piece: &Piece, lo: f64, hi: f64| {
        let map = piece.map;
        let g = |s: f64| {
            let (t, jac) = map.apply(s);
            let v = f(t);
            if v == 0.0 {
                0.0
            } else {
                v * jac
            }
        };
        gk21(&g, lo, hi)
    };

    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for (idx, piece) in pieces.iter().enumerate() {
        if piece.hi <= piece.lo {
            continue;
        }
        let p = eval(piece, piece.lo, piece.hi);
        total += p.value;
        total_err += p.error;
        heap.push(Item {
            piece: idx,
            lo: piece.lo,
            hi: piece.hi,
            value: p.value,
            error: p.error,
        });
    }

    let mut count = heap.len();
    let mut converged = true;
    loop {
        if total_err <= spec.tolerance_for(total) {
            break;
        }
        if count >= spec.max_subdivisions {
            converged = false;
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi)
            || (worst.hi - worst.lo) <= 4.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE)
        {
            heap.push(worst);
            converged = false;
            break;
        }
        let piece = &pieces[worst.piece];
        let left = eval(piece, worst.lo, mid);
        let right = eval(piece, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(Item {
            piece: worst.piece,
            lo: worst.lo,
            hi: mid,
            value: left.value,
            error: left.error,
        });
        heap.push(Item {
            piece: worst.piece,
            lo: mid,
            hi: worst.hi,
            value: right.value,
            error: right.error,
        });
        count += 1;
    }

    // re-sum to shed the drift of the running totals
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), it| (v + it.value, e + it.error));
    let converged = converged && error.is_finite() && value.is_finite();
    QuadResult {
        value,
        error_estimate: error,
        converged,
    }
}

fn finite_pieces(a: f64, b: f64, lower: Endpoint, upper: Endpoint) -> Vec<Piece> {
    let lower_piece = |lo: f64, hi: f64| match lower {
        Endpoint::Regular => Piece::identity(lo, hi),
        Endpoint::Algebraic(alpha) => {
            let p = 1.0 / (1.0 + alpha);
            Piece {
                map: Map::PowerLower { a: lo, p },
                lo: 0.0,
                hi: (hi - lo).powf(1.0 + alpha),
            }
        }
    };
    let upper_piece = |lo: f64, hi: f64| match upper {
        Endpoint::Regular => Piece::identity(lo, hi),
        Endpoint::Algebraic(alpha) => {
            let p = 1.0 / (1.0 + alpha);
            // s runs from (hi - lo)^{1+α} down to 0; orientation flips the sign
            // of dt, which the reversed limits absorb.
            Piece {
                map: Map::PowerUpper { b: hi, p },
                lo: 0.0,
                hi: (hi - lo).powf(1.0 + alpha),
            }
        }
    };
    match (lower, upper) {
        (Endpoint::Regular, Endpoint::Regular) => vec![Piece::identity(a, b)],
        (_, Endpoint::Regular) => vec![lower_piece(a, b)],
        (Endpoint::Regular, _) => vec![upper_piece(a, b)],
        _ => {
            let mid = 0.5 * (a + b);
            vec![lower_piece(a, mid), upper_piece(mid, b)]
        }
    }
}

fn build_pieces(a: f64, b: f64, spec: &QuadratureSpec) -> Vec<Piece> {
    if b.is_infinite() {
        match spec.lower {
            Endpoint::Regular => vec![Piece {
                map: Map::ExpTail { a },
                lo: 0.0,
                hi: 1.0,
            }],
            Endpoint::Algebraic(_) => {
                let mut pieces = finite_pieces(a, a + 1.0, spec.lower, Endpoint::Regular);
                pieces.push(Piece {
                    map: Map::ExpTail { a: a + 1.0 },
                    lo: 0.0,
                    hi: 1.0,
                });
                pieces
            }
        }
    } else {
        finite_pieces(a, b, spec.lower, spec.upper)
    }
}

fn check_limits(a: f64, b: f64, spec: &QuadratureSpec) -> Result<()> {
    spec.validate()?;
    if !a.is_finite() || b.is_nan() || b == f64::NEG_INFINITY {
        return Err(Error::InvalidQuadrature(format!(
            "unsupported limits ({a}, {b}); lower limit must be finite"
        )));
    }
    if b < a {
        return Err(Error::InvalidQuadrature(format!(
            "upper limit {b} below lower limit {a}"
        )));
    }
    if b.is_infinite() && !matches!(spec.upper, Endpoint::Regular) {
        return Err(Error::InvalidQuadrature(
            "an infinite upper limit cannot carry an algebraic singularity".into(),
        ));
    }
    Ok(())
}

/// Adaptive integral of `f` over `(a, b)`; `b` may be `f64::INFINITY` for
/// integrands with at least exponential decay.
///
/// Flagged algebraic endpoint behaviour `(t − a)^α` is removed by the
/// substitution `t = a + s^{1/(1+α)}` (mirrored at `b`), and `(a, ∞)` is
/// mapped onto `(0, 1)` by `t = a − ln(1 − u)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult> {
    check_limits(a, b, spec)?;
    if a == b {
        return Ok(QuadResult::exact(0.0));
    }
    Ok(adaptive(&f, &build_pieces(a, b, spec), spec))
}

/// As [`integrate`], with interior points where the integrand is known to
/// be non-smooth. Endpoint flags apply to the outer limits only.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<QuadResult> {
    check_limits(a, b, spec)?;
    if a == b {
        return Ok(QuadResult::exact(0.0));
    }
    let mut cuts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|x| x.is_finite() && *x > a && *x < b)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    if cuts.is_empty() {
        return Ok(adaptive(&f, &build_pieces(a, b, spec), spec));
    }
    let mut pieces = Vec::with_capacity(cuts.len() + 2);
    let first = cuts[0];
    let last = *cuts.last().unwrap();
    pieces.extend(finite_pieces(a, first, spec.lower, Endpoint::Regular));
    for w in cuts.windows(2) {
        pieces.push(Piece::identity(w[0], w[1]));
    }
    let tail_spec = QuadratureSpec {
        lower: Endpoint::Regular,
        ..spec.clone()
    };
    pieces.extend(build_pieces(last, b, &tail_spec));
    Ok(adaptive(&f, &pieces, spec))
}
