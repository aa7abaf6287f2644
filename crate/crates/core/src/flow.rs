//! The radial area-adding flow `(r, φ) ↦ (√(2s + r²), φ)` about a base point,
//! and normalization of the enclosed area to `π`.
//!
//! Sampled curves are mapped node by node. Polygon edges are first subdivided
//! so that each sub-edge subtends at most [`MAX_SUBTENDED`] at the base, and the
//! flow time applied to the vertices is then corrected so that the area law
//! `A(out) = A(in) + 2πs` holds to round-off for the output polygon.
//! A flow that brings the curve within [`COLLAPSE_TOL`]` · diam²` of the base
//! in squared radius counts as a collapse.

use alloc::vec::Vec;
use core::fmt;

use crate::curve::{CurveError, CurveKind, JordanCurve};
use crate::math::{self, PI, TAU};
use crate::point::Point;

/// Largest angle about the base subtended by one sub-edge of a flowed polygon.
pub const MAX_SUBTENDED: f64 = TAU / 4096.0;

/// Relative squared radius below which the flow is treated as reaching the base.
pub const COLLAPSE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum FlowError {
    /// Some point would reach or cross the base; the payload is `min (2s + r²)`.
    FlowCollapse {
        min_radius_sq: f64,
    },
    BaseOutside,
    Invalid(CurveError),
}

impl fmt::Display for FlowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowError::FlowCollapse { min_radius_sq } => {
                write!(
                    f,
                    "FlowCollapse: min of 2s + r^2 over the curve is {min_radius_sq}"
                )
            }
            FlowError::BaseOutside => {
                f.write_str("BaseOutside: base point is not inside the curve")
            }
            FlowError::Invalid(e) => write!(f, "flowed curve is invalid: {e}"),
        }
    }
}

impl From<CurveError> for FlowError {
    fn from(e: CurveError) -> Self {
        FlowError::Invalid(e)
    }
}

#[inline]
fn flow_point(p: Point, base: Point, s: f64) -> Point {
    let v = p - base;
    let r2 = v.norm_sq();
    base + v * math::sqrt((2.0 * s + r2) / r2)
}

/// Polygon vertices with every edge split into pieces of equal angle about `base`.
fn subdivide(points: &[Point], base: Point) -> Vec<Point> {
    let n = points.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let a = points[i];
        let b = points[(i + 1) % n];
        out.push(a);
        let (u, w) = (a - base, b - base);
        let sweep = math::atan2(u.cross(w), u.dot(w));
        let k = math::ceil(sweep.abs() / MAX_SUBTENDED) as usize;
        let phi0 = u.arg();
        let e = b - a;
        for j in 1..k {
            let dir = Point::unit(phi0 + sweep * j as f64 / k as f64);
            let t = -dir.cross(u) / dir.cross(e);
            if t > 0.0 && t < 1.0 {
                out.push(a + e * t);
            }
        }
    }
    out
}

fn shoelace(points: &[Point]) -> f64 {
    let n = points.len();
    0.5 * (0..n)
        .map(|i| points[i].cross(points[(i + 1) % n]))
        .sum::<f64>()
}

/// Apply the time-`s` radial flow about `base`.
pub fn radial_flow(curve: &JordanCurve, s: f64, base: Point) -> Result<JordanCurve, FlowError> {
    if !curve.contains(base) {
        return Err(FlowError::BaseOutside);
    }
    let r = curve.nearest(base).distance;
    let min_radius_sq = 2.0 * s + r * r;
    let floor = COLLAPSE_TOL * curve.diameter() * curve.diameter();
    if min_radius_sq <= floor {
        return Err(FlowError::FlowCollapse { min_radius_sq });
    }
    let out = match curve.kind() {
        CurveKind::Samples => {
            let samples = curve
                .params()
                .iter()
                .zip(curve.nodes())
                .map(|(&t, &p)| (t, flow_point(p, base, s)))
                .collect();
            JordanCurve::samples(samples)?
        }
        CurveKind::Polygon => {
            let fine = subdivide(curve.nodes(), base);
            let target = shoelace(&fine) + TAU * s;
            let mut time = s;
            let mut mapped: Vec<Point> = fine.iter().map(|&p| flow_point(p, base, time)).collect();
            for _ in 0..8 {
                let gap = shoelace(&mapped) - target;
                if gap.abs() <= 1e-15 * target.abs() {
                    break;
                }
                time -= gap / TAU;
                if 2.0 * time + r * r <= floor {
                    return Err(FlowError::FlowCollapse { min_radius_sq });
                }
                mapped = fine.iter().map(|&p| flow_point(p, base, time)).collect();
            }
            JordanCurve::polygon(mapped)?
        }
    };
    Ok(out)
}

/// Flow time `T = (π − A(C)) / 2π` that brings the area to `π`.
pub fn normalization_time(curve: &JordanCurve) -> f64 {
    (PI - curve.area()) / TAU
}

/// `radial_flow(curve, T, base)` with `T` from [`normalization_time`].
///
/// For sampled curves the discrete area of the interpolant does not follow the
/// area law exactly, so `T` is corrected by a few Newton steps with slope `2π`
/// until the output area is `π` to round-off.
pub fn normalize_area(curve: &JordanCurve, base: Point) -> Result<JordanCurve, FlowError> {
    let mut time = normalization_time(curve);
    let mut out = radial_flow(curve, time, base)?;
    if curve.kind() == CurveKind::Samples {
        for _ in 0..6 {
            let gap = out.area() - PI;
            if gap.abs() <= 1e-14 {
                break;
            }
            time -= gap / TAU;
            out = radial_flow(curve, time, base)?;
        }
    }
    Ok(out)
}

/// Scale the curve about `base` by `factor > 0`.
pub fn homothety(curve: &JordanCurve, base: Point, factor: f64) -> Result<JordanCurve, CurveError> {
    let map = |p: Point| base + (p - base) * factor;
    match curve.kind() {
        CurveKind::Polygon => JordanCurve::polygon(curve.nodes().iter().map(|&p| map(p)).collect()),
        CurveKind::Samples => JordanCurve::samples(
            curve
                .params()
                .iter()
                .zip(curve.nodes())
                .map(|(&t, &p)| (t, map(p)))
                .collect(),
        ),
    }
}

/// Homothety about `base` to area `π`.
pub fn scale_to_area_pi(curve: &JordanCurve, base: Point) -> Result<JordanCurve, CurveError> {
    homothety(curve, base, math::sqrt(PI / curve.area()))
}

/// Approximate pole of inaccessibility: the interior point farthest from the
/// curve, by a coarse grid search followed by successively finer local grids.
pub fn pole_of_inaccessibility(curve: &JordanCurve) -> Point {
    const N: usize = 32;
    let (lo, hi) = curve.bounds();
    let depth = |z: Point| -curve.signed_distance(z);
    let mut best = curve.nodes()[0];
    let mut best_depth = f64::NEG_INFINITY;
    let mut half = Point::new(0.5 * (hi.x - lo.x), 0.5 * (hi.y - lo.y));
    let mut center = (lo + hi) * 0.5;
    for _ in 0..24 {
        for i in 0..=N {
            for j in 0..=N {
                let z = Point::new(
                    center.x + half.x * (2.0 * i as f64 / N as f64 - 1.0),
                    center.y + half.y * (2.0 * j as f64 / N as f64 - 1.0),
                );
                let d = depth(z);
                if d > best_depth {
                    best_depth = d;
                    best = z;
                }
            }
        }
        center = best;
        half = half * (4.0 / N as f64);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn square(h: f64) -> JordanCurve {
        JordanCurve::polygon(vec![
            Point::new(h, h),
            Point::new(-h, h),
            Point::new(-h, -h),
            Point::new(h, -h),
        ])
        .unwrap()
    }

    #[test]
    fn circle_radius_two_flows_to_unit_circle() {
        let c = JordanCurve::circle(Point::ZERO, 2.0, 256).unwrap();
        let out = radial_flow(&c, -1.5, Point::ZERO).unwrap();
        for (p, q) in out.nodes().iter().zip(c.nodes()) {
            assert!((p.norm() - 1.0).abs() < 1e-12);
            assert!((p.arg() - q.arg()).abs() < 1e-12 || p.norm() < 0.5);
        }
        let n = normalize_area(&c, Point::ZERO).unwrap();
        assert!((n.area() - PI).abs() < 1e-9);
        assert!(n.nodes().iter().all(|p| (p.norm() - 1.0).abs() < 1e-8));
    }

    #[test]
    fn area_law_on_a_square() {
        let sq = square(0.5);
        let out = radial_flow(&sq, 0.1, Point::ZERO).unwrap();
        assert!((out.area() - 1.0 - TAU * 0.1).abs() < 1e-12);
        assert_eq!(out.kind(), CurveKind::Polygon);
    }

    #[test]
    fn collapse_and_outside() {
        let c = JordanCurve::circle(Point::ZERO, 1.0, 256).unwrap();
        match radial_flow(&c, -0.6, Point::ZERO) {
            Err(FlowError::FlowCollapse { min_radius_sq }) => {
                assert!((min_radius_sq + 0.2).abs() < 1e-8)
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            radial_flow(&c, 0.1, Point::new(3.0, 0.0)).unwrap_err(),
            FlowError::BaseOutside
        );
        let e = JordanCurve::ellipse(2.0, 1.0, 512).unwrap();
        assert!(matches!(
            normalize_area(&e, Point::ZERO),
            Err(FlowError::FlowCollapse { .. })
        ));
    }

    #[test]
    fn normalization() {
        let sq = square(1.0);
        let out = normalize_area(&sq, Point::ZERO).unwrap();
        assert!((out.area() - PI).abs() < 1e-9);
        let again = normalize_area(&out, Point::ZERO).unwrap();
        assert!((again.area() - PI).abs() < 1e-12);
        assert!(again
            .nodes()
            .iter()
            .all(|&p| out.signed_distance(p).abs() < 1e-9));
        let c = JordanCurve::circle(Point::ZERO, 1.0, 1024).unwrap();
        let same = normalize_area(&c, Point::ZERO).unwrap();
        assert!((same.area() - PI).abs() < 1e-13);
        assert!(same
            .nodes()
            .iter()
            .zip(c.nodes())
            .all(|(a, b)| a.dist(*b) < 1e-9));
        let e = JordanCurve::ellipse(1.5, 1.0, 512).unwrap();
        let n1 = normalize_area(&e, Point::ZERO).unwrap();
        let n2 = normalize_area(&n1, Point::ZERO).unwrap();
        assert!((n1.area() - PI).abs() < 1e-12);
        assert!(n2
            .nodes()
            .iter()
            .zip(n1.nodes())
            .all(|(a, b)| a.dist(*b) < 1e-9));
    }

    #[test]
    fn homothety_fallback() {
        let e = JordanCurve::ellipse(2.0, 1.0, 512).unwrap();
        let out = scale_to_area_pi(&e, Point::ZERO).unwrap();
        assert!((out.area() - PI).abs() < 1e-12);
    }

    #[test]
    fn pole_of_a_rectangle_is_its_center() {
        let r = JordanCurve::polygon(vec![
            Point::new(0.0, 0.0),
            Point::new(4.0, 0.0),
            Point::new(4.0, 2.0),
            Point::new(0.0, 2.0),
        ])
        .unwrap();
        let p = pole_of_inaccessibility(&r);
        assert!((p.y - 1.0).abs() < 1e-9);
        assert!(p.x > 0.99 && p.x < 3.01);
        assert!((-r.signed_distance(p) - 1.0).abs() < 1e-9);
    }
}
