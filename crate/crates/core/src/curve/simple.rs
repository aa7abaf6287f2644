//! Simplicity test for the closed polygon through the nodes.

use alloc::vec::Vec;
use core::cmp::Ordering;

use robust::{orient2d, Coord};

use super::CurveError;
use crate::point::Point;

#[inline]
fn orient(a: Point, b: Point, c: Point) -> f64 {
    orient2d(
        Coord { x: a.x, y: a.y },
        Coord { x: b.x, y: b.y },
        Coord { x: c.x, y: c.y },
    )
}

fn sign(v: f64) -> i8 {
    match v.partial_cmp(&0.0) {
        Some(Ordering::Greater) => 1,
        Some(Ordering::Less) => -1,
        _ => 0,
    }
}

#[inline]
fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Exact closed-segment intersection test.
fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = sign(orient(a, b, c));
    let o2 = sign(orient(a, b, d));
    let o3 = sign(orient(c, d, a));
    let o4 = sign(orient(c, d, b));
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

fn point_segment(p: Point, a: Point, b: Point) -> (f64, Point) {
    let ab = b - a;
    let t = ((p - a).dot(ab) / ab.norm_sq()).clamp(0.0, 1.0);
    let q = a + ab * t;
    (p.dist(q), q)
}

/// Distance between two segments and a point between their closest points.
fn segment_distance(a: Point, b: Point, c: Point, d: Point) -> (f64, Point) {
    let cands = [
        (point_segment(a, c, d), a),
        (point_segment(b, c, d), b),
        (point_segment(c, a, b), c),
        (point_segment(d, a, b), d),
    ];
    let mut best = cands[0];
    for cand in &cands[1..] {
        if cand.0 .0 < best.0 .0 {
            best = *cand;
        }
    }
    let ((dist, q), p) = best;
    (dist, (p + q) * 0.5)
}

fn crossing_point(a: Point, b: Point, c: Point, d: Point) -> Point {
    let r = b - a;
    let s = d - c;
    let den = r.cross(s);
    if den == 0.0 {
        return segment_distance(a, b, c, d).1;
    }
    let t = (c - a).cross(s) / den;
    a + r * t
}

pub(super) fn check_simple(points: &[Point], tol: f64) -> Result<(), CurveError> {
    let n = points.len();
    let seg = |i: usize| (points[i], points[(i + 1) % n]);

    // consecutive edges folding back onto each other
    for i in 0..n {
        let (a, b) = seg(i);
        let c = points[(i + 2) % n];
        if orient(a, b, c) == 0.0 && (a - b).dot(c - b) > 0.0 {
            return Err(CurveError::SelfIntersection {
                segments: (i, (i + 1) % n),
                location: b,
            });
        }
    }
    if n == 3 {
        return Ok(());
    }

    // sweep and prune on x
    let mut order: Vec<(f64, f64, usize)> = (0..n)
        .map(|i| {
            let (a, b) = seg(i);
            (a.x.min(b.x) - tol, a.x.max(b.x) + tol, i)
        })
        .collect();
    order.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.2.cmp(&q.2)));
    let mut hits: Vec<(usize, usize, Point)> = Vec::new();
    for (k, &(_, hi, i)) in order.iter().enumerate() {
        let (a, b) = seg(i);
        let (ylo, yhi) = (a.y.min(b.y) - tol, a.y.max(b.y) + tol);
        for &(lo_j, _, j) in &order[k + 1..] {
            if lo_j > hi {
                break;
            }
            let adjacent = (i + 1) % n == j || (j + 1) % n == i;
            if adjacent {
                continue;
            }
            let (c, d) = seg(j);
            if c.y.max(d.y) < ylo || c.y.min(d.y) > yhi {
                continue;
            }
            if segments_intersect(a, b, c, d) {
                hits.push((i.min(j), i.max(j), crossing_point(a, b, c, d)));
                continue;
            }
            let (dist, mid) = segment_distance(a, b, c, d);
            if dist <= tol {
                hits.push((i.min(j), i.max(j), mid));
            }
        }
    }
    match hits.into_iter().min_by(|p, q| (p.0, p.1).cmp(&(q.0, q.1))) {
        Some((i, j, location)) => Err(CurveError::SelfIntersection {
            segments: (i, j),
            location,
        }),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn touching_vertex_counts_as_intersection() {
        // vertex 4 sits on edge 0-1
        let v = vec![
            Point::new(0.0, 0.0),
            Point::new(4.0, 0.0),
            Point::new(4.0, 4.0),
            Point::new(2.0, 1.0),
            Point::new(2.0, 0.0),
            Point::new(0.0, 4.0),
        ];
        assert!(check_simple(&v, 0.0).is_err());
    }

    #[test]
    fn backtracking_spike_is_rejected() {
        let v = vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(3.0, 0.0),
            Point::new(2.5, 0.0),
            Point::new(1.0, 1.0),
        ];
        assert!(check_simple(&v, 1e-12).is_err());
    }

    #[test]
    fn near_touch_within_tolerance() {
        let v = vec![
            Point::new(0.0, 0.0),
            Point::new(4.0, 0.0),
            Point::new(4.0, 4.0),
            Point::new(2.0, 1e-14),
            Point::new(0.0, 4.0),
        ];
        assert!(check_simple(&v, 0.0).is_ok());
        assert!(check_simple(&v, 1e-12).is_err());
    }
}
