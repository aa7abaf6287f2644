//! Jordan curves: representation, validation and basic measures.
//!
//! A curve is stored as nodes `(s_i, c(s_i))` with `s_0 = 0` and period `2π`.
//! Polygons are parametrized by normalized cumulative chord length and
//! interpolated linearly; sampled curves keep their parameters and are
//! interpolated by the periodic C² cubic spline through the samples.

mod locator;
mod simple;
pub(crate) mod spline;

use alloc::vec::Vec;
use core::fmt;

pub(crate) use locator::Locator;
pub use locator::Nearest;

use crate::math::{self, TAU};
use crate::point::Point;
use spline::Cubic;

/// How nodes are joined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    Polygon,
    Samples,
}

/// Unvalidated input: polygon vertices or `(s, point)` samples over one period.
#[derive(Clone, Debug, PartialEq)]
pub enum CurveData {
    Polygon(Vec<Point>),
    Samples(Vec<(f64, Point)>),
}

/// Result of [`validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    pub simple: bool,
    pub closed: bool,
    /// The input was clockwise and has been reversed.
    pub reversed: bool,
    pub nodes: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurveError {
    SelfIntersection {
        segments: (usize, usize),
        location: Point,
    },
    DegenerateSegment {
        index: usize,
    },
    TooFewPoints(usize),
    NonFinite,
    BadParametrization(&'static str),
}

impl fmt::Display for CurveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveError::SelfIntersection { segments, location } => write!(
                f,
                "SelfIntersection: segments {} and {} meet near ({}, {})",
                segments.0, segments.1, location.x, location.y
            ),
            CurveError::DegenerateSegment { index } => {
                write!(f, "DegenerateSegment: zero-length edge at node {index}")
            }
            CurveError::TooFewPoints(n) => {
                write!(f, "a closed curve needs at least 3 nodes, got {n}")
            }
            CurveError::NonFinite => f.write_str("non-finite coordinate"),
            CurveError::BadParametrization(why) => write!(f, "bad parametrization: {why}"),
        }
    }
}

/// A validated, counterclockwise, simple closed curve with parameter period `2π`.
#[derive(Clone, Debug)]
pub struct JordanCurve {
    kind: CurveKind,
    params: Vec<f64>,
    points: Vec<Point>,
    pieces: Vec<Cubic>,
    area: f64,
    diameter: f64,
    locator: Locator,
}

/// Check an input curve and build the [`JordanCurve`], reversing clockwise input.
pub fn validate(data: CurveData) -> Result<(JordanCurve, ValidityReport), CurveError> {
    let (kind, mut params, mut points) = match data {
        CurveData::Polygon(mut v) => {
            if v.len() >= 2 && v.first() == v.last() {
                v.pop();
            }
            (CurveKind::Polygon, Vec::new(), v)
        }
        CurveData::Samples(mut s) => {
            if s.len() >= 2 {
                let (s_last, p_last) = s[s.len() - 1];
                if p_last == s[0].1 && (s_last - s[0].0 - TAU).abs() <= 1e-12 {
                    s.pop();
                }
            }
            let params = s.iter().map(|&(t, _)| t).collect();
            let points = s.into_iter().map(|(_, p)| p).collect();
            (CurveKind::Samples, params, points)
        }
    };
    let n = points.len();
    if n < 3 {
        return Err(CurveError::TooFewPoints(n));
    }
    if points.iter().any(|p| !p.is_finite()) || params.iter().any(|s| !s.is_finite()) {
        return Err(CurveError::NonFinite);
    }
    for i in 0..n {
        if points[i] == points[(i + 1) % n] {
            return Err(CurveError::DegenerateSegment { index: i });
        }
    }
    if kind == CurveKind::Samples {
        if params[0] != 0.0 {
            return Err(CurveError::BadParametrization(
                "first sample must sit at s = 0",
            ));
        }
        if params.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CurveError::BadParametrization(
                "sample parameters must increase strictly",
            ));
        }
        if params[n - 1] >= TAU {
            return Err(CurveError::BadParametrization(
                "samples must lie in one period [0, 2π)",
            ));
        }
    }

    let diameter = diameter_of(&points);
    simple::check_simple(&points, 1e-12 * diameter)?;

    let reversed = shoelace(&points) < 0.0;
    if reversed {
        match kind {
            CurveKind::Polygon => points.reverse(),
            CurveKind::Samples => {
                // s ↦ 2π − s, keeping the node at s = 0 first
                points[1..].reverse();
                let mut rev: Vec<f64> = params[1..].iter().map(|s| TAU - s).collect();
                rev.reverse();
                params.truncate(1);
                params.extend(rev);
            }
        }
    }
    if kind == CurveKind::Polygon {
        params = chord_parameters(&points);
    }

    let pieces = match kind {
        CurveKind::Polygon => (0..n)
            .map(|i| Cubic::linear(points[i], points[(i + 1) % n], interval(&params, i)))
            .collect(),
        CurveKind::Samples => spline::periodic_cubic(&params, &points, TAU),
    };
    let area = (0..n)
        .map(|i| piece_action(&pieces[i], interval(&params, i)))
        .sum();
    let locator = Locator::new(kind, &params, &points, &pieces, diameter);
    let curve = JordanCurve {
        kind,
        params,
        points,
        pieces,
        area,
        diameter,
        locator,
    };
    let report = ValidityReport {
        simple: true,
        closed: true,
        reversed,
        nodes: n,
    };
    Ok((curve, report))
}

/// `∫ −ξ dx` over one piece.
pub(crate) fn piece_action(piece: &Cubic, h: f64) -> f64 {
    if piece.c == Point::ZERO && piece.d == Point::ZERO {
        // straight edge: exact trapezoid
        let p = piece.a;
        let q = piece.eval(h);
        return -0.5 * (p.y + q.y) * (q.x - p.x);
    }
    math::gauss8(0.0, h, |t| -piece.eval(t).y * piece.deriv(t).x)
}

#[inline]
fn interval(params: &[f64], i: usize) -> f64 {
    if i + 1 < params.len() {
        params[i + 1] - params[i]
    } else {
        TAU - params[i]
    }
}

fn chord_parameters(points: &[Point]) -> Vec<f64> {
    let n = points.len();
    let mut cum = Vec::with_capacity(n);
    let mut acc = 0.0;
    for i in 0..n {
        cum.push(acc);
        acc += points[i].dist(points[(i + 1) % n]);
    }
    cum.iter().map(|c| TAU * c / acc).collect()
}

pub(crate) fn shoelace(points: &[Point]) -> f64 {
    let n = points.len();
    let mut acc = 0.0;
    for i in 0..n {
        acc += points[i].cross(points[(i + 1) % n]);
    }
    0.5 * acc
}

/// Diameter of a point set: monotone-chain hull, then all hull pairs.
pub(crate) fn diameter_of(points: &[Point]) -> f64 {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return if pts.len() == 2 {
            pts[0].dist(pts[1])
        } else {
            0.0
        };
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: &mut dyn Iterator<Item = &Point> = if pass == 0 {
            &mut pts.iter()
        } else {
            &mut pts.iter().rev()
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - a) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    let mut best = 0.0f64;
    for i in 0..hull.len() {
        for j in i + 1..hull.len() {
            best = best.max(hull[i].dist(hull[j]));
        }
    }
    best
}

impl JordanCurve {
    pub fn polygon(vertices: Vec<Point>) -> Result<Self, CurveError> {
        validate(CurveData::Polygon(vertices)).map(|(c, _)| c)
    }

    pub fn samples(samples: Vec<(f64, Point)>) -> Result<Self, CurveError> {
        validate(CurveData::Samples(samples)).map(|(c, _)| c)
    }

    /// Sample `f` at `n` uniformly spaced parameters of `[0, 2π)`.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> Point) -> Result<Self, CurveError> {
        let samples = (0..n)
            .map(|i| {
                let s = TAU * i as f64 / n as f64;
                (s, f(s))
            })
            .collect();
        Self::samples(samples)
    }

    /// Circle of radius `r` about `center`, sampled at `n` points.
    pub fn circle(center: Point, r: f64, n: usize) -> Result<Self, CurveError> {
        Self::from_fn(n, |s| center + Point::unit(s) * r)
    }

    /// Ellipse with semi-axes `a` (along x) and `b`, centered at the origin.
    pub fn ellipse(a: f64, b: f64, n: usize) -> Result<Self, CurveError> {
        Self::from_fn(n, |s| {
            let (sn, cs) = math::sin_cos(s);
            Point::new(a * cs, b * sn)
        })
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Node parameters, `params()[0] == 0`.
    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn nodes(&self) -> &[Point] {
        &self.points
    }

    /// Back to raw form (the parametrization of polygons is implied).
    pub fn to_data(&self) -> CurveData {
        match self.kind {
            CurveKind::Polygon => CurveData::Polygon(self.points.clone()),
            CurveKind::Samples => CurveData::Samples(
                self.params
                    .iter()
                    .copied()
                    .zip(self.points.iter().copied())
                    .collect(),
            ),
        }
    }

    /// Signed area, positive (the curve is counterclockwise).
    pub fn area(&self) -> f64 {
        self.area
    }

    /// Length of the polygon through the nodes.
    pub fn arc_length(&self) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| self.points[i].dist(self.points[(i + 1) % n]))
            .sum()
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Axis-aligned bounds of the nodes, `(min, max)`.
    pub fn bounds(&self) -> (Point, Point) {
        let mut lo = self.points[0];
        let mut hi = lo;
        for p in &self.points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }

    /// Index of the piece containing `s ∈ [0, 2π)` and the local offset.
    #[inline]
    pub(crate) fn locate(&self, s: f64) -> (usize, f64) {
        let s = math::wrap_tau(s);
        let i = match self.params.binary_search_by(|p| p.total_cmp(&s)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        (i, s - self.params[i])
    }

    pub(crate) fn piece(&self, i: usize) -> &Cubic {
        &self.pieces[i]
    }

    pub(crate) fn piece_len(&self, i: usize) -> f64 {
        interval(&self.params, i)
    }

    /// Parameter at the start of piece `i`; `2π` for `i == len()`.
    pub(crate) fn knot(&self, i: usize) -> f64 {
        if i < self.params.len() {
            self.params[i]
        } else {
            TAU
        }
    }

    /// `c(s)`, with `s` taken mod `2π`.
    #[inline]
    pub fn point(&self, s: f64) -> Point {
        let (i, t) = self.locate(s);
        self.pieces[i].eval(t)
    }

    /// `c'(s)`; right derivative at polygon vertices.
    #[inline]
    pub fn tangent(&self, s: f64) -> Point {
        let (i, t) = self.locate(s);
        self.pieces[i].deriv(t)
    }

    /// Nearest point of the curve to `z`.
    pub fn nearest(&self, z: Point) -> Nearest {
        self.locator.nearest(self, z)
    }

    /// Distance to the curve, negative inside.
    pub fn signed_distance(&self, z: Point) -> f64 {
        self.locator.signed_distance(self, z)
    }

    /// Signed distance clamped to `±cap`; the sign is always exact. Caps below
    /// three cells of the internal index are raised to that size.
    pub fn signed_distance_capped(&self, z: Point, cap: f64) -> f64 {
        self.locator.signed_distance_capped(self, z, cap)
    }

    /// Whether `z` lies in the open region bounded by the curve.
    pub fn contains(&self, z: Point) -> bool {
        self.signed_distance(z) < 0.0
    }

    /// Winding number of the node polygon about `z`.
    pub fn winding_number(&self, z: Point) -> i32 {
        winding_number(&self.points, z)
    }
}

/// Crossing-rule winding number of a closed polygon about `z`.
pub fn winding_number(points: &[Point], z: Point) -> i32 {
    let n = points.len();
    let mut w = 0;
    for i in 0..n {
        let a = points[i];
        let b = points[(i + 1) % n];
        if a.y <= z.y {
            if b.y > z.y && (b - a).cross(z - a) > 0.0 {
                w += 1;
            }
        } else if b.y <= z.y && (b - a).cross(z - a) < 0.0 {
            w -= 1;
        }
    }
    w
}

/// Signed area of the curve.
pub fn area(curve: &JordanCurve) -> f64 {
    curve.area()
}

/// Polygonal length of the discretization.
pub fn arc_length(curve: &JordanCurve) -> f64 {
    curve.arc_length()
}

/// Signed distance, negative inside.
pub fn signed_distance(curve: &JordanCurve, z: Point) -> f64 {
    curve.signed_distance(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::PI;
    use alloc::vec;

    fn square() -> Vec<Point> {
        vec![
            Point::new(1.0, 1.0),
            Point::new(-1.0, 1.0),
            Point::new(-1.0, -1.0),
            Point::new(1.0, -1.0),
        ]
    }

    #[test]
    fn unit_square_is_valid_and_ccw() {
        let (c, rep) = validate(CurveData::Polygon(square())).unwrap();
        assert!(rep.simple && rep.closed && !rep.reversed);
        assert_eq!(c.area(), 4.0);
        assert_eq!(c.arc_length(), 8.0);
    }

    #[test]
    fn reversed_square_is_repaired() {
        let mut v = square();
        v.reverse();
        let (c, rep) = validate(CurveData::Polygon(v)).unwrap();
        assert!(rep.reversed);
        assert_eq!(c.area(), 4.0);
    }

    #[test]
    fn bowtie_is_rejected() {
        let v = vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 2.0),
            Point::new(2.0, 0.0),
            Point::new(0.0, 2.0),
        ];
        match validate(CurveData::Polygon(v)) {
            Err(CurveError::SelfIntersection { location, .. }) => {
                assert!((location - Point::new(1.0, 1.0)).norm() < 1e-12)
            }
            other => panic!("expected SelfIntersection, got {other:?}"),
        }
    }

    #[test]
    fn zero_length_edge_is_rejected() {
        let v = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
        ];
        assert_eq!(
            validate(CurveData::Polygon(v)).unwrap_err(),
            CurveError::DegenerateSegment { index: 1 }
        );
    }

    #[test]
    fn closing_vertex_is_dropped() {
        let mut v = square();
        v.push(v[0]);
        let c = JordanCurve::polygon(v).unwrap();
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn clockwise_samples_reverse_parameter() {
        let n = 64;
        let s: Vec<(f64, Point)> = (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                (t, Point::unit(-t))
            })
            .collect();
        let (c, rep) = validate(CurveData::Samples(s)).unwrap();
        assert!(rep.reversed);
        assert_eq!(c.params()[0], 0.0);
        for (&t, p) in c.params().iter().zip(c.nodes()) {
            assert!((*p - Point::unit(t)).norm() < 1e-12);
        }
        assert!(c.area() > 0.0);
    }

    #[test]
    fn sampled_areas() {
        let c = JordanCurve::circle(Point::ZERO, 1.0, 1024).unwrap();
        assert!((c.area() - PI).abs() < 1e-6);
        let e = JordanCurve::ellipse(2.0, 1.0, 1024).unwrap();
        assert!((e.area() - 2.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn polygonal_lengths() {
        let c = JordanCurve::circle(Point::ZERO, 1.0, 1024).unwrap();
        assert!((c.arc_length() - TAU).abs() < 1e-4);
        let coarse = JordanCurve::circle(Point::ZERO, 1.0, 64).unwrap();
        assert!(coarse.arc_length() < TAU);
    }

    #[test]
    fn signed_distance_examples() {
        let c = JordanCurve::circle(Point::ZERO, 1.0, 1024).unwrap();
        assert!((c.signed_distance(Point::ZERO) + 1.0).abs() < 1e-10);
        assert!((c.signed_distance(Point::new(2.0, 0.0)) - 1.0).abs() < 1e-10);
        let sq = JordanCurve::polygon(square()).unwrap();
        assert_eq!(sq.signed_distance(Point::new(0.5, 0.0)), -0.5);
        assert_eq!(sq.signed_distance(Point::new(3.0, 0.0)), 2.0);
        assert!((sq.signed_distance(Point::new(2.0, 2.0)) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn chord_parameters_follow_length() {
        let v = vec![
            Point::new(0.0, 0.0),
            Point::new(3.0, 0.0),
            Point::new(3.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        let c = JordanCurve::polygon(v).unwrap();
        let expect = [0.0, 3.0 / 8.0, 4.0 / 8.0, 7.0 / 8.0];
        for (p, e) in c.params().iter().zip(expect) {
            assert!((p - TAU * e).abs() < 1e-15);
        }
        assert_eq!(c.point(TAU * 3.0 / 16.0), Point::new(1.5, 0.0));
    }

    #[test]
    fn diameter_of_square() {
        assert!((diameter_of(&square()) - 8f64.sqrt()).abs() < 1e-15);
    }
}
