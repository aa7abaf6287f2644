//! The rotation `R_θ` on pairs of plane points, its Hamiltonian, the action
//! shift of its contact lift, and the lift coordinate of a curve pair.

use core::fmt;

use crate::curve::JordanCurve;
use crate::math::{self, PI};
use crate::point::Point;
use crate::primitive::Primitive;

/// Tolerance on `A(C) mod π` for the lift to close.
pub const LIFT_CLOSURE_TOL: f64 = 1e-6;

/// A point `(z1, z2)` of `ℂ²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairPoint {
    pub z1: Point,
    pub z2: Point,
}

impl PairPoint {
    pub const fn new(z1: Point, z2: Point) -> Self {
        PairPoint { z1, z2 }
    }

    /// The pair `(m + d, m − d)`.
    pub fn from_center(m: Point, d: Point) -> Self {
        PairPoint {
            z1: m + d,
            z2: m - d,
        }
    }

    pub fn center(&self) -> Point {
        (self.z1 + self.z2) * 0.5
    }

    pub fn half_diagonal(&self) -> Point {
        (self.z1 - self.z2) * 0.5
    }
}

/// A value of the lift coordinate `t ∈ ℝ/πℤ`, stored in `[0, π)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LiftValue(f64);

impl LiftValue {
    pub fn new(t: f64) -> Self {
        LiftValue(math::rem_euclid(t, PI))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Circular distance in `ℝ/πℤ`.
    pub fn distance(self, other: LiftValue) -> f64 {
        math::circular_distance(self.0, other.0, PI)
    }

    /// Distance to the class of a real number.
    pub fn distance_to(self, t: f64) -> f64 {
        self.distance(LiftValue::new(t))
    }
}

impl core::ops::Add<f64> for LiftValue {
    type Output = LiftValue;
    fn add(self, t: f64) -> LiftValue {
        LiftValue::new(self.0 + t)
    }
}

impl core::ops::Sub for LiftValue {
    type Output = LiftValue;
    fn sub(self, o: LiftValue) -> LiftValue {
        LiftValue::new(self.0 - o.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LiftError {
    /// The enclosed area is not a multiple of `π`; the payload is the distance.
    LiftNotClosed { violation: f64 },
}

impl fmt::Display for LiftError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiftError::LiftNotClosed { violation } => {
                write!(
                    f,
                    "lift does not close: area is {violation:e} away from a multiple of pi"
                )
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LiftClosure {
    Closed,
    Violation(f64),
}

/// `R_θ(z1, z2) = (m + e^{−iθ}d, m − e^{−iθ}d)`.
pub fn r_theta(theta: f64, p: PairPoint) -> PairPoint {
    let m = p.center();
    let d = p.half_diagonal().rotate(-theta);
    PairPoint::from_center(m, d)
}

/// `H(z1, z2) = |z1 − z2|² / 4`.
pub fn hamiltonian_h(p: PairPoint) -> f64 {
    (p.z1 - p.z2).norm_sq() * 0.25
}

/// Action shift of the lifted rotation, `Δt = −¼·Re(D₀²·e^{−iθ})·sin θ`
/// with `D₀ = z1 − z2`.
pub fn action_shift(theta: f64, p: PairPoint) -> f64 {
    let d0 = p.z1 - p.z2;
    let sq = d0.cmul(d0);
    let (s, c) = math::sin_cos(theta);
    // Re(sq · e^{−iθ}) = sq.x cos θ + sq.y sin θ
    -0.25 * (sq.x * c + sq.y * s) * s
}

fn closure_violation(area: f64) -> f64 {
    (area - PI * math::round(area / PI)).abs()
}

/// Whether `A(C) ∈ πℤ` within [`LIFT_CLOSURE_TOL`].
pub fn verify_lift_closure(curve: &JordanCurve) -> LiftClosure {
    let v = closure_violation(curve.area());
    if v < LIFT_CLOSURE_TOL {
        LiftClosure::Closed
    } else {
        LiftClosure::Violation(v)
    }
}

/// `t = −f(s1) − f(s2) mod π`.
pub fn lift_t(f: &Primitive, s1: f64, s2: f64) -> Result<LiftValue, LiftError> {
    let violation = closure_violation(f.period_increment());
    if violation >= LIFT_CLOSURE_TOL {
        return Err(LiftError::LiftNotClosed { violation });
    }
    Ok(LiftValue::new(-f.eval(s1) - f.eval(s2)))
}
