#![no_std]

extern crate alloc;

pub mod annulus;
pub mod curve;
pub mod finder;
pub mod flow;
mod math;
pub mod mollify;
pub mod monotone;
pub mod point;
pub mod primitive;
pub mod spectrum;
pub mod symplectic;

pub use curve::{validate, CurveData, CurveError, CurveKind, JordanCurve, Nearest, ValidityReport};
pub use point::Point;
