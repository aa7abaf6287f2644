//! Periodic cubic interpolation on a non-uniform parameter grid.

use alloc::vec;
use alloc::vec::Vec;

use crate::point::Point;

/// One cubic piece `a + b·t + c·t² + d·t³`, `t ∈ [0, h]`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Cubic {
    pub a: Point,
    pub b: Point,
    pub c: Point,
    pub d: Point,
}

impl Cubic {
    #[inline]
    pub fn eval(&self, t: f64) -> Point {
        self.a + (self.b + (self.c + self.d * t) * t) * t
    }

    #[inline]
    pub fn deriv(&self, t: f64) -> Point {
        self.b + (self.c * 2.0 + self.d * (3.0 * t)) * t
    }

    #[inline]
    pub fn deriv2(&self, t: f64) -> Point {
        self.c * 2.0 + self.d * (6.0 * t)
    }

    /// Straight segment from `p` to `q` over a piece of length `h`.
    pub fn linear(p: Point, q: Point, h: f64) -> Self {
        Cubic {
            a: p,
            b: (q - p) / h,
            c: Point::ZERO,
            d: Point::ZERO,
        }
    }
}

/// Solve a cyclic tridiagonal system in place (Sherman–Morrison).
///
/// Row `i` reads `sub[i]·x[i-1] + diag[i]·x[i] + sup[i]·x[i+1] = rhs[i]`, indices mod n.
fn solve_cyclic(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    debug_assert!(n >= 3);
    let gamma = -diag[0];
    let alpha = sup[n - 1];
    let beta = sub[0];
    let mut d = diag.to_vec();
    d[0] -= gamma;
    d[n - 1] -= alpha * beta / gamma;

    let thomas = |r: &[f64]| -> Vec<f64> {
        let mut c = vec![0.0; n];
        let mut x = vec![0.0; n];
        c[0] = sup[0] / d[0];
        x[0] = r[0] / d[0];
        for i in 1..n {
            let m = d[i] - sub[i] * c[i - 1];
            c[i] = if i + 1 < n { sup[i] / m } else { 0.0 };
            x[i] = (r[i] - sub[i] * x[i - 1]) / m;
        }
        for i in (0..n - 1).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        x
    };

    let y = thomas(rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = thomas(&u);
    let factor = (y[0] + beta * y[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    y.iter()
        .zip(z.iter())
        .map(|(yi, zi)| yi - factor * zi)
        .collect()
}

/// Pieces of the periodic C² cubic interpolant through `(params[i], points[i])`, period `period`.
pub(crate) fn periodic_cubic(params: &[f64], points: &[Point], period: f64) -> Vec<Cubic> {
    let n = params.len();
    let h: Vec<f64> = (0..n)
        .map(|i| {
            if i + 1 < n {
                params[i + 1] - params[i]
            } else {
                period + params[0] - params[i]
            }
        })
        .collect();
    let next = |i: usize| points[(i + 1) % n];

    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut rx = vec![0.0; n];
    let mut ry = vec![0.0; n];
    for i in 0..n {
        let hp = h[(i + n - 1) % n];
        let hi = h[i];
        sub[i] = hp;
        diag[i] = 2.0 * (hp + hi);
        sup[i] = hi;
        let prev = points[(i + n - 1) % n];
        let s1 = (next(i) - points[i]) / hi;
        let s0 = (points[i] - prev) / hp;
        rx[i] = 6.0 * (s1.x - s0.x);
        ry[i] = 6.0 * (s1.y - s0.y);
    }
    let mx = solve_cyclic(&sub, &diag, &sup, &rx);
    let my = solve_cyclic(&sub, &diag, &sup, &ry);

    (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            let hi = h[i];
            let m0 = Point::new(mx[i], my[i]);
            let m1 = Point::new(mx[j], my[j]);
            Cubic {
                a: points[i],
                b: (points[j] - points[i]) / hi - (m0 * 2.0 + m1) * (hi / 6.0),
                c: m0 * 0.5,
                d: (m1 - m0) / (6.0 * hi),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::TAU;

    #[test]
    fn interpolates_nodes_and_closes() {
        let n = 17;
        let params: Vec<f64> = (0..n)
            .map(|i| TAU * (i as f64 + 0.3 * ((i % 3) as f64)) / n as f64)
            .collect();
        let points: Vec<Point> = params
            .iter()
            .map(|&s| Point::new(libm::cos(s) * 2.0, libm::sin(3.0 * s)))
            .collect();
        let pieces = periodic_cubic(&params, &points, TAU);
        for i in 0..n {
            let j = (i + 1) % n;
            let h = if j == 0 {
                TAU - params[i]
            } else {
                params[j] - params[i]
            };
            assert!((pieces[i].a - points[i]).norm() < 1e-14);
            assert!((pieces[i].eval(h) - points[j]).norm() < 1e-12);
            assert!((pieces[i].deriv(h) - pieces[j].deriv(0.0)).norm() < 1e-10);
            assert!((pieces[i].deriv2(h) - pieces[j].deriv2(0.0)).norm() < 1e-8);
        }
    }
}
