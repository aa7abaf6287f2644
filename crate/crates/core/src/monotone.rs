//! Local monotonicity and the window-by-window construction of the primitive.
//!
//! On a window `U_p` where `g_p(q) = c(q)·v` is strictly monotone, the curve is
//! a graph over the `v` axis, so `∫ ξ_p dx_p` can be written as an integral in
//! the variable `q′ = g_p(q)` of `c(g_p⁻¹(q′))·n`. Adding the correction
//! `h_p` (a primitive of `ξ dx − ξ_p dx_p`) and flipping the sign gives the
//! primitive of `−ξ dx` on that window; windows are glued by additive constants.

use alloc::vec::Vec;
use core::fmt;

use crate::curve::{CurveKind, JordanCurve};
use crate::math::{self, PI, TAU};
use crate::point::Point;
use crate::primitive::Primitive;

/// A parameter window on which `q ↦ c(q)·direction` is strictly increasing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonotoneWindow {
    pub center: f64,
    /// Open interval `(lo, hi)` of parameters, `lo < center < hi`.
    pub lo: f64,
    pub hi: f64,
    pub direction: Point,
    /// `direction` turned by a quarter, so that `(direction, normal)` is oriented.
    pub normal: Point,
}

impl MonotoneWindow {
    pub fn new(center: f64, width: f64, direction: Point) -> Self {
        let v = direction / direction.norm();
        MonotoneWindow {
            center,
            lo: center - 0.5 * width,
            hi: center + 0.5 * width,
            direction: v,
            normal: v.perp(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MonotoneError {
    /// Window `index` fails the strict monotonicity check.
    NotMonotone(usize),
    /// Parameters near this value are not covered by an overlap of windows.
    CoverageGap(f64),
}

impl fmt::Display for MonotoneError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonotoneError::NotMonotone(i) => write!(f, "NotMonotone: window {i}"),
            MonotoneError::CoverageGap(s) => write!(f, "CoverageGap near s = {s}"),
        }
    }
}

/// Outcome of [`is_locally_monotone`].
#[derive(Clone, Debug, PartialEq)]
pub enum Monotonicity {
    Monotone(Vec<MonotoneWindow>),
    /// No direction works on the window around this parameter.
    Fails {
        witness: f64,
    },
}

/// Parameters at which the window is checked: ends, knots, and (for splines) interior points.
fn check_points(curve: &JordanCurve, lo: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    out.push(lo);
    let turns = math::floor(lo / TAU);
    let base = turns * TAU;
    let n = curve.len();
    let sub = match curve.kind() {
        CurveKind::Polygon => 1,
        CurveKind::Samples => 4,
    };
    // walk knots from the one at or before lo
    let (first, _) = curve.locate(lo);
    let mut k = first;
    let mut offset = base;
    loop {
        let knot = curve.knot(k) + offset;
        let h = curve.piece_len(k);
        for j in 0..sub {
            let q = knot + h * j as f64 / sub as f64;
            if q > lo && q < hi {
                out.push(q);
            }
        }
        if knot >= hi {
            break;
        }
        k += 1;
        if k == n {
            k = 0;
            offset += TAU;
        }
    }
    out.push(hi);
    out
}

/// `min_k Δ(c·v)/|Δc|` over consecutive check points; positive iff strictly increasing.
fn margin(points: &[Point], v: Point) -> f64 {
    let mut m = f64::INFINITY;
    for w in points.windows(2) {
        let d = w[1] - w[0];
        let len = d.norm();
        if len == 0.0 {
            return -1.0;
        }
        m = m.min(d.dot(v) / len);
    }
    m
}

/// Best oriented margin for direction angle `alpha` (flipping `v` when decreasing).
fn oriented_margin(points: &[Point], alpha: f64) -> (f64, Point) {
    let v = Point::unit(alpha);
    let up = margin(points, v);
    let down = margin(points, -v);
    if up >= down {
        (up, v)
    } else {
        (down, -v)
    }
}

const CANDIDATES: usize = 64;

/// Search a monotone direction for the window `[lo, hi]`.
fn best_direction(points: &[Point]) -> (f64, Point) {
    let step = PI / CANDIDATES as f64;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for k in 0..CANDIDATES {
        let a = step * k as f64;
        let (m, _) = oriented_margin(points, a);
        if m > best.0 {
            best = (m, a);
        }
    }
    let (alpha, _) = math::golden_max(best.1 - step, best.1 + step, 40, |a| {
        oriented_margin(points, a).0
    });
    let refined = oriented_margin(points, alpha);
    let coarse = oriented_margin(points, best.1);
    if refined.0 >= coarse.0 {
        refined
    } else {
        coarse
    }
}

/// Margin of a given window, recomputed on the discretization.
pub fn window_margin(curve: &JordanCurve, w: &MonotoneWindow) -> f64 {
    let pts: Vec<Point> = check_points(curve, w.lo, w.hi)
        .iter()
        .map(|&q| curve.point(q))
        .collect();
    margin(&pts, w.direction)
}

/// Try to cover the curve by windows of width `window_width` with a monotone direction each.
///
/// Window centres are the curve's knots together with a uniform grid fine
/// enough that consecutive windows overlap by at least two thirds.
pub fn is_locally_monotone(curve: &JordanCurve, window_width: f64) -> Monotonicity {
    assert!(window_width > 0.0, "window width must be positive");
    let width = window_width.min(TAU);
    let mut centers: Vec<f64> = curve.params().to_vec();
    let m = math::ceil(3.0 * TAU / width) as usize;
    centers.extend((0..m).map(|k| TAU * k as f64 / m as f64));
    centers.sort_by(f64::total_cmp);
    centers.dedup();

    let mut windows = Vec::with_capacity(centers.len());
    for &c in &centers {
        let (lo, hi) = (c - 0.5 * width, c + 0.5 * width);
        let pts: Vec<Point> = check_points(curve, lo, hi)
            .iter()
            .map(|&q| curve.point(q))
            .collect();
        let (mg, v) = best_direction(&pts);
        if mg <= 0.0 {
            return Monotonicity::Fails { witness: c };
        }
        windows.push(MonotoneWindow::new(c, width, v));
    }
    Monotonicity::Monotone(windows)
}

/// One window's local primitive of `+ξ dx`, measured from the window centre.
struct LocalPrimitive<'a> {
    curve: &'a JordanCurve,
    w: MonotoneWindow,
}

impl LocalPrimitive<'_> {
    #[inline]
    fn g(&self, q: f64) -> f64 {
        self.curve.point(q).dot(self.w.direction)
    }

    /// `g⁻¹(target)` restricted to `[a, b]` (where `g` is increasing).
    fn g_inverse(&self, target: f64, mut a: f64, mut b: f64) -> f64 {
        let mut t = 0.5 * (a + b);
        for _ in 0..100 {
            let gt = self.g(t) - target;
            if gt == 0.0 {
                return t;
            }
            if gt > 0.0 {
                b = t;
            } else {
                a = t;
            }
            let slope = self.curve.tangent(t).dot(self.w.direction);
            let newton = t - gt / slope;
            t = if slope > 0.0 && newton > a && newton < b {
                newton
            } else {
                0.5 * (a + b)
            };
            if b - a <= 4.0 * f64::EPSILON * b.abs().max(1.0) {
                break;
            }
            if (self.g(t) - target).abs() <= 1e-16 * target.abs().max(1.0) {
                return t;
            }
        }
        t
    }

    /// `∫_{g(a)}^{g(b)} c(g⁻¹(q′))·n dq′` for `a ≤ b` inside one piece.
    fn piece_integral(&self, a: f64, b: f64) -> f64 {
        let (ga, gb) = (self.g(a), self.g(b));
        math::gauss8(ga, gb, |qp| {
            let t = self.g_inverse(qp, a, b);
            self.curve.point(t).dot(self.w.normal)
        })
    }

    /// `∫_{g(p)}^{g(q)} c(g⁻¹(q′))·n dq′`, split at knots.
    fn graph_integral(&self, q: f64) -> f64 {
        let p = self.w.center;
        let (lo, hi, sign) = if q >= p { (p, q, 1.0) } else { (q, p, -1.0) };
        let mut acc = 0.0;
        let mut a = lo;
        while a < hi {
            let (k, off) = self.curve.locate(a);
            let knot_next = a - off + self.curve.piece_len(k);
            let b = knot_next.min(hi);
            if b <= a {
                break;
            }
            acc += self.piece_integral(a, b);
            a = b;
        }
        sign * acc
    }

    /// Primitive of `ξ dx − ξ_p dx_p`.
    fn correction(&self, z: Point) -> f64 {
        let (c, s) = (self.w.direction.x, self.w.direction.y);
        s * s * z.x * z.y + s * c * 0.5 * (z.x * z.x - z.y * z.y)
    }

    /// Local primitive of `−ξ dx` (up to a constant).
    fn eval(&self, q: f64) -> f64 {
        -(self.graph_integral(q) + self.correction(self.curve.point(q)))
    }
}

/// Glue local primitives over a covering family of monotone windows.
///
/// The result lives on the union of the curve's knots and the window centres
/// and is normalized to `f(0) = 0`; its period increment is obtained by
/// carrying the constants once around the curve.
pub fn primitive_monotone(
    curve: &JordanCurve,
    windows: &[MonotoneWindow],
) -> Result<Primitive, MonotoneError> {
    if windows.is_empty() {
        return Err(MonotoneError::CoverageGap(0.0));
    }
    for (i, w) in windows.iter().enumerate() {
        if !(w.lo < w.center && w.center < w.hi) || window_margin(curve, w) <= 0.0 {
            return Err(MonotoneError::NotMonotone(i));
        }
    }
    // canonical copies with centres in [0, 2π), sorted
    let mut ws: Vec<MonotoneWindow> = windows
        .iter()
        .map(|w| {
            let shift = math::floor(w.center / TAU) * TAU;
            MonotoneWindow {
                center: w.center - shift,
                lo: w.lo - shift,
                hi: w.hi - shift,
                ..*w
            }
        })
        .collect();
    ws.sort_by(|a, b| a.center.total_cmp(&b.center));
    let k = ws.len();
    if k == 1 && ws[0].hi - ws[0].lo <= TAU {
        return Err(MonotoneError::CoverageGap(ws[0].hi));
    }

    // matching points between consecutive windows (last one wraps)
    let mut matches = Vec::with_capacity(k);
    for i in 0..k {
        let (cur, next_lo, next_center) = if i + 1 < k {
            (ws[i], ws[i + 1].lo, ws[i + 1].center)
        } else {
            (ws[i], ws[0].lo + TAU, ws[0].center + TAU)
        };
        if cur.hi <= next_lo {
            return Err(MonotoneError::CoverageGap(cur.hi));
        }
        let m = 0.5 * (cur.hi.min(next_center) + next_lo.max(cur.center));
        matches.push(m);
    }

    let locals: Vec<LocalPrimitive> = ws.iter().map(|&w| LocalPrimitive { curve, w }).collect();
    let mut consts = Vec::with_capacity(k + 1);
    consts.push(0.0);
    for i in 0..k {
        let m = matches[i];
        let here = locals[i].eval(m) + consts[i];
        let next = if i + 1 < k {
            locals[i + 1].eval(m)
        } else {
            locals[0].eval(m - TAU)
        };
        consts.push(here - next);
    }
    let period_increment = consts[k] - consts[0];

    let mut grid: Vec<f64> = curve.params().to_vec();
    grid.extend(ws.iter().map(|w| w.center));
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    // window i owns [matches[i-1], matches[i]); window 0 owns [matches[k-1] − 2π, matches[0])
    let last = matches[k - 1];
    let mut values: Vec<f64> = grid
        .iter()
        .map(|&s| {
            if s >= last {
                locals[0].eval(s - TAU) + consts[k]
            } else if s < last - TAU {
                locals[k - 1].eval(s + TAU) + consts[k - 1] - period_increment
            } else {
                let i = matches.iter().position(|&m| s < m).unwrap_or(0);
                locals[i].eval(s) + consts[i]
            }
        })
        .collect();
    let f0 = values[0];
    for v in values.iter_mut() {
        *v -= f0;
    }
    Ok(Primitive::from_values(
        curve,
        grid,
        values,
        period_increment,
    ))
}
