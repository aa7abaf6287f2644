//! Mollification `c_n(p) = ∫ δ⁻¹χ(u/δ) c(p − u) du` of a parametrized curve.

use alloc::vec::Vec;
use core::fmt;

use crate::curve::{CurveError, CurveKind, JordanCurve};
use crate::math::{self, GAUSS8, TAU};
use crate::point::Point;

/// `∫₋₁¹ exp(−1/(1−q²)) dq`.
pub const BUMP_MASS: f64 = 0.443_993_816_168_079_4;

/// Uniform output grid size for mollified polygons (raised for very small `δ`).
pub const POLYGON_GRID: usize = 4096;
const MAX_GRID: usize = 1 << 16;
/// Equal sub-panels of the kernel support, further split at curve knots.
const PANELS: usize = 16;

/// The bump `χ(q) ∝ exp(−1/(1−q²))` on `(−1, 1)`, with unit integral.
pub fn bump(q: f64) -> f64 {
    if q.abs() >= 1.0 {
        0.0
    } else {
        math::exp(-1.0 / (1.0 - q * q)) / BUMP_MASS
    }
}

/// Kernel scale `δ` for index `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MollifierSpec {
    pub n: u32,
    pub delta: f64,
}

impl MollifierSpec {
    /// Half the largest `δ` for which the Lipschitz bound on the discrete
    /// modulus of continuity stays below `1/n`.
    pub fn for_curve(curve: &JordanCurve, n: u32) -> Self {
        MollifierSpec {
            n,
            delta: 0.5 * max_delta(curve, n),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MollifyError {
    BadSpec(&'static str),
    NotSimpleAfterSmoothing(CurveError),
    /// The a posteriori sup distance reached `1/n`.
    TooFar(f64),
}

impl fmt::Display for MollifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MollifyError::BadSpec(why) => write!(f, "invalid mollifier: {why}"),
            MollifyError::NotSimpleAfterSmoothing(e) => write!(f, "NotSimpleAfterSmoothing: {e}"),
            MollifyError::TooFar(d) => write!(f, "mollified curve is {d} away from the input"),
        }
    }
}

/// Largest speed `|c′|` seen on the pieces: `|c(p) − c(p′)| ≤ speed · |p − p′|`.
pub fn max_speed(curve: &JordanCurve) -> f64 {
    let mut v = 0.0f64;
    for (i, &s0) in curve.params().iter().enumerate() {
        let h = curve.knot(i + 1) - s0;
        for k in 0..=8 {
            v = v.max(curve.piece(i).deriv(h * k as f64 / 8.0).norm());
        }
    }
    v
}

/// Largest `δ` with `speed · δ < 1/n`.
pub fn max_delta(curve: &JordanCurve, n: u32) -> f64 {
    1.0 / (n as f64 * max_speed(curve))
}

/// Sup over `grid` of `|a(s) − b(s)|`.
pub fn sup_distance(a: &JordanCurve, b: &JordanCurve, grid: &[f64]) -> f64 {
    grid.iter()
        .map(|&s| a.point(s).dist(b.point(s)))
        .fold(0.0, f64::max)
}

/// `c_n(p)`, integrating over `s = p − u` panel by panel, split at the knots
/// so every panel sees a single polynomial piece. The kernel weights are
/// normalized by their own discrete sum, so constants are reproduced exactly.
fn convolve(curve: &JordanCurve, p: f64, delta: f64, cuts: &mut Vec<f64>) -> Point {
    let a = p - delta;
    let b = p + delta;
    cuts.clear();
    for k in 0..=PANELS {
        cuts.push(a + 2.0 * delta * k as f64 / PANELS as f64);
    }
    let n = curve.len();
    let turn = math::floor(a / TAU);
    let base = turn * TAU;
    let (first, _) = curve.locate(a - base);
    let params = curve.params();
    let mut j = first + 1;
    loop {
        let k = base + TAU * (j / n) as f64 + params[j % n];
        if k >= b {
            break;
        }
        if k > a {
            cuts.push(k);
        }
        j += 1;
    }
    cuts.sort_by(f64::total_cmp);
    let mut mass = 0.0;
    let mut acc = Point::ZERO;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo {
            continue;
        }
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        for &(x, wt) in GAUSS8.iter() {
            let s = mid + half * x;
            let k = wt * half * bump((p - s) / delta);
            mass += k;
            acc += curve.point(s) * k;
        }
    }
    acc / mass
}

/// Output parameters: the input grid for sampled curves, a uniform grid for polygons.
fn output_grid(curve: &JordanCurve, delta: f64) -> Vec<f64> {
    match curve.kind() {
        CurveKind::Samples => curve.params().to_vec(),
        CurveKind::Polygon => {
            let wanted = math::ceil(4.0 * TAU / delta).min(MAX_GRID as f64) as usize;
            let m = wanted.max(POLYGON_GRID);
            (0..m).map(|j| TAU * j as f64 / m as f64).collect()
        }
    }
}

/// Convolve the curve with the scaled bump and resample it as a sampled curve.
pub fn mollify(curve: &JordanCurve, spec: &MollifierSpec) -> Result<JordanCurve, MollifyError> {
    if spec.n == 0 {
        return Err(MollifyError::BadSpec("n must be positive"));
    }
    if !(spec.delta > 0.0 && spec.delta.is_finite()) {
        return Err(MollifyError::BadSpec("delta must be positive"));
    }
    if spec.delta >= max_delta(curve, spec.n) {
        return Err(MollifyError::BadSpec(
            "delta violates the modulus-of-continuity bound",
        ));
    }
    let grid = output_grid(curve, spec.delta);
    let mut cuts = Vec::with_capacity(2 * PANELS);
    let samples: Vec<(f64, Point)> = grid
        .iter()
        .map(|&s| (s, convolve(curve, s, spec.delta, &mut cuts)))
        .collect();
    let far = samples
        .iter()
        .map(|&(s, q)| q.dist(curve.point(s)))
        .fold(0.0, f64::max);
    if far >= 1.0 / spec.n as f64 {
        return Err(MollifyError::TooFar(far));
    }
    JordanCurve::samples(samples).map_err(MollifyError::NotSimpleAfterSmoothing)
}
