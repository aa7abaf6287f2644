//! Primitives of the tautological form along a curve.
//!
//! The stored function is the real-valued lift `f(s) = ∫₀ˢ −ξ(u)·x′(u) du`,
//! so that the counterclockwise unit circle gives `f(s) = s/2 − sin(2s)/4`
//! and `f(s + 2π) = f(s) + A(C)`.

use alloc::vec::Vec;

use crate::curve::{piece_action, JordanCurve};
use crate::math::{self, TAU};

/// Quasi-periodic primitive sampled on a grid of `[0, 2π)` with `grid[0] == 0`.
///
/// Between grid points the function is the quintic Hermite interpolant of the
/// values and of the first two derivatives taken from the curve.
#[derive(Clone, Debug, PartialEq)]
pub struct Primitive {
    grid: Vec<f64>,
    values: Vec<f64>,
    /// `(f′, f″)` at the left and right end of each grid interval.
    jets: Vec<[(f64, f64); 2]>,
    period_increment: f64,
}

/// `(f′, f″)` from a piece of the curve at local offset `t`.
fn jet(curve: &JordanCurve, piece: usize, t: f64) -> (f64, f64) {
    let c = curve.piece(piece);
    let p = c.eval(t);
    let d1 = c.deriv(t);
    let d2 = c.deriv2(t);
    (-p.y * d1.x, -d1.y * d1.x - p.y * d2.x)
}

impl Primitive {
    /// Assemble from values on `grid`, taking derivatives from `curve`.
    pub(crate) fn from_values(
        curve: &JordanCurve,
        grid: Vec<f64>,
        values: Vec<f64>,
        period_increment: f64,
    ) -> Self {
        let m = grid.len();
        let jets = (0..m)
            .map(|j| {
                let a = grid[j];
                let b = if j + 1 < m { grid[j + 1] } else { TAU };
                // piece containing the interior of [a, b]
                let (pi, _) = curve.locate(0.5 * (a + b));
                let k0 = curve.knot(pi);
                [jet(curve, pi, a - k0), jet(curve, pi, b - k0)]
            })
            .collect();
        Primitive {
            grid,
            values,
            jets,
            period_increment,
        }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `f(s + 2π) − f(s)`, the enclosed area.
    pub fn period_increment(&self) -> f64 {
        self.period_increment
    }

    /// `f(s)` for any real `s`.
    pub fn eval(&self, s: f64) -> f64 {
        let turns = math::floor(s / TAU);
        let mut u = s - turns * TAU;
        let mut turns = turns;
        if u >= TAU {
            u -= TAU;
            turns += 1.0;
        }
        let j = match self.grid.binary_search_by(|g| g.total_cmp(&u)) {
            Ok(j) => return self.values[j] + turns * self.period_increment,
            Err(j) => j - 1,
        };
        let a = self.grid[j];
        let (b, fb) = if j + 1 < self.grid.len() {
            (self.grid[j + 1], self.values[j + 1])
        } else {
            (TAU, self.values[0] + self.period_increment)
        };
        let h = b - a;
        let t = (u - a) / h;
        let [(m0, a0), (m1, a1)] = self.jets[j];
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t3 * t;
        let t5 = t4 * t;
        let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
        let h3 = 0.5 * t3 - t4 + 0.5 * t5;
        let h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h5 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
        let fa = self.values[j];
        h0 * fa
            + h1 * h * m0
            + h2 * h * h * a0
            + h3 * h * h * a1
            + h4 * h * m1
            + h5 * fb
            + turns * self.period_increment
    }
}

/// Primitive of `−ξ dx` by exact per-piece integration, normalized to `f(0) = 0`.
pub fn primitive(curve: &JordanCurve) -> Primitive {
    let n = curve.len();
    let mut values = Vec::with_capacity(n);
    let mut acc = 0.0;
    for i in 0..n {
        values.push(acc);
        acc += piece_action(curve.piece(i), curve.piece_len(i));
    }
    Primitive::from_values(curve, curve.params().to_vec(), values, acc)
}
