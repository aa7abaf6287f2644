//! Uniform-grid index over the curve pieces for nearest-point queries.
//!
//! Each piece is registered in every cell its bounding box (inflated by the
//! piece's deviation from its chord) touches. Cells holding no piece carry an
//! inside/outside label from a scanline pass, so far-away sign queries are O(1).

use alloc::vec;
use alloc::vec::Vec;

use super::spline::Cubic;
use super::{CurveKind, JordanCurve};
use crate::math;
use crate::point::Point;

/// Nearest point of a curve to a query point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Nearest {
    pub distance: f64,
    /// Curve parameter of the foot point, in `[0, 2π)`.
    pub param: f64,
    pub point: Point,
    pub inside: bool,
    /// Another branch of the curve is equally close (to round-off) and far away in parameter.
    pub ambiguous: bool,
}

impl Nearest {
    #[inline]
    pub fn signed_distance(&self) -> f64 {
        if self.inside {
            -self.distance
        } else {
            self.distance
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Locator {
    kind: CurveKind,
    origin: Point,
    cell: f64,
    nx: usize,
    ny: usize,
    start: Vec<u32>,
    items: Vec<u32>,
    inside: Vec<bool>,
    dev: Vec<f64>,
    tie_tol: f64,
}

#[derive(Clone, Copy)]
struct Hit {
    dist: f64,
    piece: usize,
    t: f64,
}

impl Locator {
    pub(crate) fn new(
        kind: CurveKind,
        params: &[f64],
        points: &[Point],
        pieces: &[Cubic],
        diameter: f64,
    ) -> Self {
        let n = points.len();
        let h = |i: usize| {
            if i + 1 < n {
                params[i + 1] - params[i]
            } else {
                math::TAU - params[i]
            }
        };
        let dev: Vec<f64> = match kind {
            CurveKind::Polygon => vec![0.0; n],
            CurveKind::Samples => (0..n)
                .map(|i| {
                    let hi = h(i);
                    let a = points[i];
                    let b = points[(i + 1) % n];
                    let mut m = 0.0f64;
                    for k in 1..16 {
                        let u = k as f64 / 16.0;
                        m = m.max(pieces[i].eval(u * hi).dist(a.lerp(b, u)));
                    }
                    1.25 * m + 1e-14 * diameter
                })
                .collect(),
        };
        let max_dev = dev.iter().copied().fold(0.0, f64::max);

        let mut lo = points[0];
        let mut hi = lo;
        for p in points {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let ext = hi - lo;
        let side = math::sqrt((ext.x.max(1e-300) * ext.y.max(1e-300)) / n as f64)
            .max(ext.x.max(ext.y) / 512.0);
        let pad = max_dev + 0.5 * side;
        let origin = lo - Point::new(pad, pad);
        let nx = (math::ceil((ext.x + 2.0 * pad) / side) as usize).clamp(1, 512);
        let ny = (math::ceil((ext.y + 2.0 * pad) / side) as usize).clamp(1, 512);
        let cell = ((ext.x + 2.0 * pad) / nx as f64).max((ext.y + 2.0 * pad) / ny as f64);

        let cell_range = |p: f64, q: f64, o: f64, m: usize| -> (usize, usize) {
            let a = math::floor((p - o) / cell).max(0.0) as usize;
            let b = math::floor((q - o) / cell).max(0.0) as usize;
            (a.min(m - 1), b.min(m - 1))
        };
        let mut counts = vec![0u32; nx * ny + 1];
        let mut boxes = Vec::with_capacity(n);
        for i in 0..n {
            let a = points[i];
            let b = points[(i + 1) % n];
            let d = dev[i];
            let (x0, x1) = cell_range(a.x.min(b.x) - d, a.x.max(b.x) + d, origin.x, nx);
            let (y0, y1) = cell_range(a.y.min(b.y) - d, a.y.max(b.y) + d, origin.y, ny);
            boxes.push((x0, x1, y0, y1));
            for cy in y0..=y1 {
                for cx in x0..=x1 {
                    counts[cy * nx + cx + 1] += 1;
                }
            }
        }
        for k in 1..counts.len() {
            counts[k] += counts[k - 1];
        }
        let start = counts.clone();
        let mut fill = counts;
        let mut items = vec![0u32; start[nx * ny] as usize];
        for (i, &(x0, x1, y0, y1)) in boxes.iter().enumerate() {
            for cy in y0..=y1 {
                for cx in x0..=x1 {
                    let c = cy * nx + cx;
                    items[fill[c] as usize] = i as u32;
                    fill[c] += 1;
                }
            }
        }

        // scanline labels at cell centres
        let mut inside = vec![false; nx * ny];
        let mut xs: Vec<f64> = Vec::new();
        for cy in 0..ny {
            let y = origin.y + (cy as f64 + 0.5) * cell;
            xs.clear();
            for i in 0..n {
                let a = points[i];
                let b = points[(i + 1) % n];
                if (a.y <= y) != (b.y <= y) {
                    xs.push(a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x));
                }
            }
            xs.sort_by(f64::total_cmp);
            for cx in 0..nx {
                let x = origin.x + (cx as f64 + 0.5) * cell;
                let left = xs.iter().take_while(|&&v| v < x).count();
                inside[cy * nx + cx] = left % 2 == 1;
            }
        }

        Locator {
            kind,
            origin,
            cell,
            nx,
            ny,
            start,
            items,
            inside,
            dev,
            tie_tol: 1e-12 * diameter,
        }
    }

    #[inline]
    fn clamp_cell(&self, z: Point) -> (usize, usize) {
        let fx = math::floor((z.x - self.origin.x) / self.cell);
        let fy = math::floor((z.y - self.origin.y) / self.cell);
        let cx = if fx.is_nan() {
            0.0
        } else {
            fx.clamp(0.0, (self.nx - 1) as f64)
        };
        let cy = if fy.is_nan() {
            0.0
        } else {
            fy.clamp(0.0, (self.ny - 1) as f64)
        };
        (cx as usize, cy as usize)
    }

    #[inline]
    fn cell_rect_distance(&self, z: Point, cx: usize, cy: usize) -> f64 {
        let x0 = self.origin.x + cx as f64 * self.cell;
        let y0 = self.origin.y + cy as f64 * self.cell;
        let dx = (x0 - z.x).max(z.x - x0 - self.cell).max(0.0);
        let dy = (y0 - z.y).max(z.y - y0 - self.cell).max(0.0);
        math::hypot(dx, dy)
    }

    /// Distance from `z` to the grid rectangle.
    fn outside_distance(&self, z: Point) -> f64 {
        let w = self.nx as f64 * self.cell;
        let h = self.ny as f64 * self.cell;
        let dx = (self.origin.x - z.x).max(z.x - self.origin.x - w).max(0.0);
        let dy = (self.origin.y - z.y).max(z.y - self.origin.y - h).max(0.0);
        math::hypot(dx, dy)
    }

    fn piece_hit(&self, curve: &JordanCurve, i: usize, z: Point) -> Hit {
        let piece = curve.piece(i);
        let h = curve.piece_len(i);
        match self.kind {
            CurveKind::Polygon => {
                let a = piece.a;
                let ab = piece.b * h;
                let u = ((z - a).dot(ab) / ab.norm_sq()).clamp(0.0, 1.0);
                let q = if u >= 1.0 { piece.eval(h) } else { a + ab * u };
                Hit {
                    dist: z.dist(q),
                    piece: i,
                    t: u * h,
                }
            }
            CurveKind::Samples => project_cubic(piece, h, z, i),
        }
    }

    /// Ring search for the closest piece within `limit`.
    fn search(
        &self,
        curve: &JordanCurve,
        z: Point,
        limit: f64,
        mut all: Option<&mut Vec<Hit>>,
    ) -> Option<Hit> {
        let (ci, cj) = self.clamp_cell(z);
        let dz = self.outside_distance(z);
        let mut best: Option<Hit> = None;
        let mut bound = limit;
        let mut refined: [usize; 8] = [usize::MAX; 8];
        let mut nref = 0usize;
        let kmax = self.nx.max(self.ny);
        for k in 0..=kmax {
            let ring_lb = math::hypot(dz, (k.saturating_sub(1)) as f64 * self.cell);
            if k > 0 && ring_lb >= bound {
                break;
            }
            let (x0, x1) = (ci as isize - k as isize, ci as isize + k as isize);
            let (y0, y1) = (cj as isize - k as isize, cj as isize + k as isize);
            for cy in y0.max(0)..=y1.min(self.ny as isize - 1) {
                let edge_row = cy == y0 || cy == y1;
                let mut cx = x0.max(0);
                while cx <= x1.min(self.nx as isize - 1) {
                    let (ux, uy) = (cx as usize, cy as usize);
                    if self.cell_rect_distance(z, ux, uy) < bound {
                        let c = uy * self.nx + ux;
                        for &it in &self.items[self.start[c] as usize..self.start[c + 1] as usize] {
                            let i = it as usize;
                            if self.kind == CurveKind::Samples {
                                let a = curve.nodes()[i];
                                let b = curve.nodes()[(i + 1) % curve.len()];
                                let chord = point_segment_distance(z, a, b);
                                if chord - self.dev[i] >= bound {
                                    continue;
                                }
                                if refined[..nref.min(8)].contains(&i) {
                                    continue;
                                }
                                refined[nref % 8] = i;
                                nref += 1;
                            }
                            let hit = self.piece_hit(curve, i, z);
                            if let Some(v) = all.as_deref_mut() {
                                v.push(hit);
                            }
                            let better = match best {
                                None => hit.dist < bound,
                                Some(b) => {
                                    hit.dist < b.dist || (hit.dist == b.dist && hit.piece < b.piece)
                                }
                            };
                            if better {
                                best = Some(hit);
                                bound = bound.min(hit.dist + self.tie_tol);
                            }
                        }
                    }
                    cx += if edge_row || cx == x1 {
                        1
                    } else {
                        (x1 - cx).max(1)
                    };
                }
            }
            if x0 <= 0 && y0 <= 0 && x1 >= self.nx as isize - 1 && y1 >= self.ny as isize - 1 {
                break;
            }
        }
        best
    }

    fn finish(&self, curve: &JordanCurve, z: Point, hit: Hit) -> Nearest {
        let piece = curve.piece(hit.piece);
        let point = piece.eval(hit.t);
        let h = curve.piece_len(hit.piece);
        let inside = match self.kind {
            CurveKind::Samples => piece.deriv(hit.t).cross(z - point) > 0.0,
            CurveKind::Polygon => {
                let n = curve.len();
                let nodes = curve.nodes();
                let outward = |k: usize| {
                    let d = nodes[(k + 1) % n] - nodes[k];
                    Point::new(d.y, -d.x) / d.norm()
                };
                if hit.t <= 0.0 {
                    let pn = outward((hit.piece + n - 1) % n) + outward(hit.piece);
                    (z - nodes[hit.piece]).dot(pn) < 0.0
                } else if hit.t >= h {
                    let j = (hit.piece + 1) % n;
                    let pn = outward(hit.piece) + outward(j);
                    (z - nodes[j]).dot(pn) < 0.0
                } else {
                    (piece.b).cross(z - piece.a) > 0.0
                }
            }
        };
        Nearest {
            distance: hit.dist,
            param: math::wrap_tau(curve.knot(hit.piece) + hit.t),
            point,
            inside,
            ambiguous: false,
        }
    }

    /// Exact nearest point.
    pub(crate) fn nearest(&self, curve: &JordanCurve, z: Point) -> Nearest {
        let mut all = Vec::new();
        let hit = self
            .search(curve, z, f64::INFINITY, Some(&mut all))
            .expect("a curve has at least one piece");
        let mut out = self.finish(curve, z, hit);
        // a competing foot point on a far branch
        let n = curve.len();
        let far = |p: usize| {
            let d = (p + n - hit.piece) % n;
            d > 1 && d < n - 1
        };
        out.ambiguous = hit.dist > 1e3 * self.tie_tol
            && all
                .iter()
                .any(|h| far(h.piece) && (h.dist - hit.dist).abs() <= self.tie_tol);
        out
    }

    pub(crate) fn signed_distance(&self, curve: &JordanCurve, z: Point) -> f64 {
        let hit = self
            .search(curve, z, f64::INFINITY, None)
            .expect("a curve has at least one piece");
        self.finish(curve, z, hit).signed_distance()
    }

    /// Signed distance, exact when `|d| < cap` and `±cap` (with the correct sign) otherwise.
    pub(crate) fn signed_distance_capped(&self, curve: &JordanCurve, z: Point, cap: f64) -> f64 {
        let cap = cap.max(3.0 * self.cell);
        match self.search(curve, z, cap, None) {
            Some(hit) => self.finish(curve, z, hit).signed_distance(),
            None => {
                if self.outside_distance(z) > 0.0 {
                    cap
                } else {
                    let (ci, cj) = self.clamp_cell(z);
                    if self.inside[cj * self.nx + ci] {
                        -cap
                    } else {
                        cap
                    }
                }
            }
        }
    }
}

#[inline]
fn point_segment_distance(z: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let u = ((z - a).dot(ab) / ab.norm_sq()).clamp(0.0, 1.0);
    z.dist(a + ab * u)
}

/// Closest point of one cubic piece to `z`: best of five samples, then safeguarded Newton.
fn project_cubic(piece: &Cubic, h: f64, z: Point, index: usize) -> Hit {
    let phi = |t: f64| (piece.eval(t) - z).norm_sq();
    let mut t = 0.0;
    let mut best = phi(0.0);
    for k in 1..=4 {
        let u = h * k as f64 / 4.0;
        let v = phi(u);
        if v < best {
            best = v;
            t = u;
        }
    }
    for _ in 0..16 {
        let r = piece.eval(t) - z;
        let d1 = piece.deriv(t);
        let g = r.dot(d1);
        let gp = d1.norm_sq() + r.dot(piece.deriv2(t));
        if gp <= 0.0 {
            break;
        }
        let next = (t - g / gp).clamp(0.0, h);
        let v = phi(next);
        if v > best {
            break;
        }
        let step = (next - t).abs();
        t = next;
        best = v;
        if step <= 1e-16 * h.max(1.0) {
            break;
        }
    }
    Hit {
        dist: math::sqrt(best),
        piece: index,
        t,
    }
}
