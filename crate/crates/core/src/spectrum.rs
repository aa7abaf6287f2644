//! Barcodes: the circle's reference barcode, the strip classifier, action
//! spectra of curves and the bottleneck distance.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::curve::JordanCurve;
use crate::finder::{find_rectangles, FinderError, FinderOptions, FinderResult};
use crate::math::{self, PI};
use crate::symplectic::LiftValue;

/// Actions closer than this (mod `π`) are one spectral value.
pub const SPECTRUM_CLUSTER_TOL: f64 = 1e-6;

/// Half-open interval `[birth, death)` in cohomological degree `degree`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bar {
    pub birth: f64,
    /// May be `f64::INFINITY`.
    pub death: f64,
    pub degree: i32,
}

impl Bar {
    pub fn new(birth: f64, death: f64, degree: i32) -> Self {
        debug_assert!(birth < death);
        Bar {
            birth,
            death,
            degree,
        }
    }

    pub fn length(&self) -> f64 {
        self.death - self.birth
    }
}

/// Bars sorted by `(degree, birth, death)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Barcode {
    bars: Vec<Bar>,
    /// Index window `N` the bars were generated for.
    pub window: usize,
}

impl Barcode {
    pub fn new(mut bars: Vec<Bar>, window: usize) -> Self {
        bars.sort_by(|a, b| {
            a.degree
                .cmp(&b.degree)
                .then(a.birth.total_cmp(&b.birth))
                .then(a.death.total_cmp(&b.death))
        });
        Barcode { bars, window }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }
}

/// Bars `[nπ, (n+1)π)` in degree `2n` and `[θ + (n−1)π, θ + nπ)` in degree
/// `2n − 1`, for `|n| ≤ N`.
pub fn circle_barcode(theta: f64, window: usize) -> Barcode {
    let w = window as i32;
    let mut bars = Vec::with_capacity(2 * (2 * window + 1));
    for n in -w..=w {
        let nf = n as f64;
        bars.push(Bar::new(nf * PI, (nf + 1.0) * PI, 2 * n));
        bars.push(Bar::new(
            theta + (nf - 1.0) * PI,
            theta + nf * PI,
            2 * n - 1,
        ));
    }
    Barcode::new(bars, window)
}

/// The two triangle families of the `(t, θ)` strip.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionShape {
    /// `∆′_n`: `nπ < t ≤ nπ + θ`.
    Upper,
    /// `∇′_n`: `(n−1)π + θ < t ≤ nπ`.
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegionClass {
    pub shape: RegionShape,
    pub n: i64,
    /// `(2n+1, 2n+2)` on `∆′_n`, `(2n, 2n+1)` on `∇′_n`.
    pub hom_degrees: (i64, i64),
}

impl RegionClass {
    fn upper(n: i64) -> Self {
        RegionClass {
            shape: RegionShape::Upper,
            n,
            hom_degrees: (2 * n + 1, 2 * n + 2),
        }
    }

    fn lower(n: i64) -> Self {
        RegionClass {
            shape: RegionShape::Lower,
            n,
            hom_degrees: (2 * n, 2 * n + 1),
        }
    }

    pub fn shape_name(&self) -> &'static str {
        match self.shape {
            RegionShape::Upper => "triangle_up",
            RegionShape::Lower => "triangle_down",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectrumError {
    InvalidTheta(f64),
    /// `t` is within round-off of a region boundary that is not exactly representable.
    OnBoundary {
        t: f64,
        boundary: f64,
    },
    NonFinite,
}

impl fmt::Display for SpectrumError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrumError::InvalidTheta(t) => write!(f, "theta must lie in (0, pi), got {t}"),
            SpectrumError::OnBoundary { t, boundary } => {
                write!(
                    f,
                    "OnBoundary: t = {t} is within 1e-12 of the region boundary {boundary}"
                )
            }
            SpectrumError::NonFinite => f.write_str("t must be finite"),
        }
    }
}

/// Tolerance of the [`SpectrumError::OnBoundary`] test.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Region of the strip containing `(t, θ)`.
///
/// The boundaries `t = 0` and `t = θ` are exact and follow the interval
/// conventions; `t` within [`BOUNDARY_TOL`] of any other boundary `nπ` or
/// `nπ + θ` is reported as [`SpectrumError::OnBoundary`].
pub fn classify_strip(t: f64, theta: f64) -> Result<RegionClass, SpectrumError> {
    if !(theta > 0.0 && theta < PI) {
        return Err(SpectrumError::InvalidTheta(theta));
    }
    if !t.is_finite() {
        return Err(SpectrumError::NonFinite);
    }
    let tol = BOUNDARY_TOL * t.abs().max(1.0);
    let near = math::round(t / PI);
    for n in [near - 1.0, near, near + 1.0] {
        if n == 0.0 {
            continue;
        }
        for boundary in [n * PI, n * PI + theta] {
            if (t - boundary).abs() <= tol {
                return Err(SpectrumError::OnBoundary { t, boundary });
            }
        }
    }
    // kπ < t ≤ (k+1)π
    let mut k = math::ceil(t / PI) - 1.0;
    if t <= k * PI {
        k -= 1.0;
    } else if t > (k + 1.0) * PI {
        k += 1.0;
    }
    let k = k as i64;
    if t <= k as f64 * PI + theta {
        Ok(RegionClass::upper(k))
    } else {
        Ok(RegionClass::lower(k + 1))
    }
}

/// Distinct actions of a finder result (clustered within
/// [`SPECTRUM_CLUSTER_TOL`] mod `π`), always including `0` for the diagonal.
pub fn spectrum_of(result: &FinderResult) -> Vec<LiftValue> {
    let mut values: Vec<f64> = result
        .points
        .iter()
        .filter_map(|p| p.action.map(LiftValue::value))
        .collect();
    values.push(0.0);
    values.sort_by(f64::total_cmp);
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for v in values {
        match groups.last_mut() {
            Some(g) if v - g[g.len() - 1] <= SPECTRUM_CLUSTER_TOL => g.push(v),
            _ => groups.push(vec![v]),
        }
    }
    // the class of 0 wraps around π
    if groups.len() > 1 {
        let last = groups[groups.len() - 1][groups[groups.len() - 1].len() - 1];
        if PI - last + groups[0][0] <= SPECTRUM_CLUSTER_TOL {
            let tail = groups.pop().unwrap_or_default();
            groups[0].extend(tail);
        }
    }
    groups
        .iter()
        .map(|g| {
            if g.contains(&0.0) {
                LiftValue::new(0.0)
            } else {
                LiftValue::new(g[(g.len() - 1) / 2])
            }
        })
        .collect()
}

/// Action spectrum of the curve at `θ` from [`find_rectangles`].
pub fn action_spectrum(
    curve: &JordanCurve,
    theta: f64,
    opts: &FinderOptions,
) -> Result<Vec<LiftValue>, FinderError> {
    match find_rectangles(curve, theta, opts) {
        Ok(r) => Ok(spectrum_of(&r)),
        Err(FinderError::NoSolution) => Ok(vec![LiftValue::new(0.0)]),
        Err(e) => Err(e),
    }
}

fn match_cost(a: &Bar, b: &Bar) -> f64 {
    match (a.death.is_infinite(), b.death.is_infinite()) {
        (true, true) => (a.birth - b.birth).abs(),
        (false, false) => (a.birth - b.birth).abs().max((a.death - b.death).abs()),
        _ => f64::INFINITY,
    }
}

fn delete_cost(a: &Bar) -> f64 {
    0.5 * a.length()
}

/// Whether a perfect matching exists with all costs `≤ eps`.
fn matchable(a: &[Bar], b: &[Bar], eps: f64) -> bool {
    let (p, q) = (a.len(), b.len());
    let size = p + q;
    // left: a[0..p], then q diagonal slots; right: b[0..q], then p diagonal slots
    let adj: Vec<Vec<usize>> = (0..size)
        .map(|i| {
            let mut out = Vec::new();
            if i < p {
                for (j, bj) in b.iter().enumerate() {
                    if match_cost(&a[i], bj) <= eps {
                        out.push(j);
                    }
                }
                if delete_cost(&a[i]) <= eps {
                    out.push(q + i);
                }
            } else {
                let j = i - p;
                if delete_cost(&b[j]) <= eps {
                    out.push(j);
                }
                out.extend(q..q + p);
            }
            out
        })
        .collect();
    let mut owner: Vec<usize> = vec![usize::MAX; size];
    fn augment(i: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [usize]) -> bool {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                if owner[j] == usize::MAX || augment(owner[j], adj, seen, owner) {
                    owner[j] = i;
                    return true;
                }
            }
        }
        false
    }
    for i in 0..size {
        let mut seen = vec![false; size];
        if !augment(i, &adj, &mut seen, &mut owner) {
            return false;
        }
    }
    true
}

fn bottleneck_degree(a: &[Bar], b: &[Bar]) -> f64 {
    let mut candidates: Vec<f64> = Vec::new();
    candidates.push(0.0);
    for x in a {
        candidates.push(delete_cost(x));
        for y in b {
            candidates.push(match_cost(x, y));
        }
    }
    for y in b {
        candidates.push(delete_cost(y));
    }
    candidates.retain(|c| c.is_finite());
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let (mut lo, mut hi) = (0usize, candidates.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if matchable(a, b, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates.get(lo).copied().unwrap_or(f64::INFINITY)
}

/// Degree-wise bottleneck distance, maximized over degrees.
pub fn bottleneck(b1: &Barcode, b2: &Barcode) -> f64 {
    let mut degrees: Vec<i32> = b1.bars.iter().chain(&b2.bars).map(|b| b.degree).collect();
    degrees.sort_unstable();
    degrees.dedup();
    degrees
        .into_iter()
        .map(|d| {
            let a: Vec<Bar> = b1.bars.iter().copied().filter(|b| b.degree == d).collect();
            let b: Vec<Bar> = b2.bars.iter().copied().filter(|b| b.degree == d).collect();
            bottleneck_degree(&a, &b)
        })
        .fold(0.0, f64::max)
}
