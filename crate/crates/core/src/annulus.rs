//! Argument oscillation about a base point and the energy bound between level
//! curves of a nested family.

use alloc::vec::Vec;
use core::fmt;

use crate::curve::{CurveKind, JordanCurve};
use crate::math::{self, TAU};
use crate::point::Point;

/// Sub-samples per spline piece when lifting the argument of a sampled curve.
const SPLINE_SUBSAMPLES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AnnulusError {
    BaseOutside,
    BaseOnCurve,
    NotNested,
    /// No curve of the family sits at this level.
    UnknownLevel(f64),
    /// `u0 > u1`.
    ReversedLevels,
}

impl fmt::Display for AnnulusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnnulusError::BaseOutside => {
                f.write_str("BaseOutside: base point is not inside the curve")
            }
            AnnulusError::BaseOnCurve => f.write_str("BaseOnCurve: base point lies on the curve"),
            AnnulusError::NotNested => {
                f.write_str("NotNested: inner curve is not strictly inside the outer curve")
            }
            AnnulusError::UnknownLevel(u) => write!(f, "no curve of the family at level {u}"),
            AnnulusError::ReversedLevels => f.write_str("u0 must not exceed u1"),
        }
    }
}

fn check_base(curve: &JordanCurve, base: Point) -> Result<(), AnnulusError> {
    let d = curve.signed_distance(base);
    if d.abs() <= 1e-12 * curve.diameter() {
        Err(AnnulusError::BaseOnCurve)
    } else if d > 0.0 {
        Err(AnnulusError::BaseOutside)
    } else {
        Ok(())
    }
}

/// `(max θ̃ − min θ̃) / 2π` for the continuous lift `θ̃` of `arg(c(s) − base)`.
pub fn argument_oscillation(curve: &JordanCurve, base: Point) -> Result<f64, AnnulusError> {
    check_base(curve, base)?;
    // straight edges have monotone argument, so vertices carry the extrema
    let pts: Vec<Point> = match curve.kind() {
        CurveKind::Polygon => curve.nodes().to_vec(),
        CurveKind::Samples => {
            let n = curve.len();
            let mut v = Vec::with_capacity(n * SPLINE_SUBSAMPLES);
            for i in 0..n {
                let (a, b) = (curve.params()[i], curve.knot(i + 1));
                for k in 0..SPLINE_SUBSAMPLES {
                    v.push(curve.point(a + (b - a) * k as f64 / SPLINE_SUBSAMPLES as f64));
                }
            }
            v
        }
    };
    let mut lift = 0.0f64;
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    let m = pts.len();
    for i in 0..m {
        let u = pts[i] - base;
        let w = pts[(i + 1) % m] - base;
        lift += math::atan2(u.cross(w), u.dot(w));
        lo = lo.min(lift);
        hi = hi.max(lift);
    }
    Ok((hi - lo) / TAU)
}

/// `L = max(osc(inner), osc(outer)) + 1`.
pub fn annulus_l(
    inner: &JordanCurve,
    outer: &JordanCurve,
    base: Point,
) -> Result<f64, AnnulusError> {
    if !inner
        .nodes()
        .iter()
        .all(|&p| outer.signed_distance(p) < 0.0)
    {
        return Err(AnnulusError::NotNested);
    }
    let a = argument_oscillation(inner, base)?;
    let b = argument_oscillation(outer, base)?;
    Ok(a.max(b) + 1.0)
}

/// `2(L + 1)(A1 − A0)`.
pub fn energy_bound_formula(l: f64, area0: f64, area1: f64) -> f64 {
    2.0 * (l + 1.0) * (area1 - area0)
}

/// Nested level curves `C_u` about a common base point.
#[derive(Clone, Debug)]
pub struct AnnulusFamily {
    levels: Vec<(f64, JordanCurve)>,
    base: Point,
}

impl AnnulusFamily {
    /// Levels are sorted by `u`; consecutive curves must be strictly nested and
    /// the base must lie inside the innermost one.
    pub fn new(mut levels: Vec<(f64, JordanCurve)>, base: Point) -> Result<Self, AnnulusError> {
        levels.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some((_, first)) = levels.first() {
            check_base(first, base)?;
        }
        for w in levels.windows(2) {
            if !w[0]
                .1
                .nodes()
                .iter()
                .all(|&p| w[1].1.signed_distance(p) < 0.0)
            {
                return Err(AnnulusError::NotNested);
            }
        }
        Ok(AnnulusFamily { levels, base })
    }

    pub fn base(&self) -> Point {
        self.base
    }

    pub fn levels(&self) -> &[(f64, JordanCurve)] {
        &self.levels
    }

    pub fn curve(&self, u: f64) -> Result<&JordanCurve, AnnulusError> {
        self.levels
            .iter()
            .find(|(v, _)| (v - u).abs() <= 1e-12 * u.abs().max(1.0))
            .map(|(_, c)| c)
            .ok_or(AnnulusError::UnknownLevel(u))
    }
}

/// One line of the bound report.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyBound {
    pub u0: f64,
    pub u1: f64,
    pub l: f64,
    pub area_gap: f64,
    pub bound: f64,
}

/// `2(L + 1)(A(C_{u1}) − A(C_{u0}))` with `L = annulus_l(C_{u0}, C_{u1}, base)`;
/// zero when `u0 == u1`.
pub fn energy_bound(family: &AnnulusFamily, u0: f64, u1: f64) -> Result<EnergyBound, AnnulusError> {
    if u0 > u1 {
        return Err(AnnulusError::ReversedLevels);
    }
    let c0 = family.curve(u0)?;
    let c1 = family.curve(u1)?;
    if u0 == u1 {
        let l = argument_oscillation(c0, family.base)? + 1.0;
        return Ok(EnergyBound {
            u0,
            u1,
            l,
            area_gap: 0.0,
            bound: 0.0,
        });
    }
    let l = annulus_l(c0, c1, family.base)?;
    let area_gap = c1.area() - c0.area();
    Ok(EnergyBound {
        u0,
        u1,
        l,
        area_gap,
        bound: energy_bound_formula(l, c0.area(), c1.area()),
    })
}

/// A curve whose argument about the origin runs forward over two full turns
/// and back over one: the unit circle joined through a radial neck to a
/// spiral arm that winds once more around it.
pub fn double_turn_spiral(per_turn: usize) -> JordanCurve {
    let w = 0.3;
    let r_in = |phi: f64| 1.3 + 0.5 * phi / TAU;
    let mut v = Vec::new();
    for k in 0..per_turn {
        let phi = w + (TAU - w) * k as f64 / per_turn as f64;
        v.push(Point::unit(phi));
    }
    let steps = 2 * per_turn;
    let span = TAU + w;
    for k in 0..=steps {
        let phi = span * k as f64 / steps as f64;
        v.push(Point::unit(phi) * (r_in(phi) + 0.2));
    }
    for k in (0..=steps).rev() {
        let phi = w + (span - w) * k as f64 / steps as f64;
        v.push(Point::unit(phi) * r_in(phi));
    }
    JordanCurve::polygon(v).expect("spiral is simple")
}
