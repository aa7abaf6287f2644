use std::f64::consts::{PI, TAU};

use pegscope_core::annulus::{argument_oscillation, energy_bound, AnnulusFamily};
use pegscope_core::flow::{homothety, normalize_area, radial_flow, FlowError};
use pegscope_core::mollify::{mollify, sup_distance, MollifierSpec};
use pegscope_core::{JordanCurve, Point};
use proptest::prelude::*;

fn star(radii: &[f64]) -> JordanCurve {
    let m = radii.len();
    JordanCurve::polygon(
        radii
            .iter()
            .enumerate()
            .map(|(k, &r)| Point::unit(TAU * k as f64 / m as f64) * r)
            .collect(),
    )
    .unwrap()
}

fn smooth_star(a: f64, k: f64) -> JordanCurve {
    JordanCurve::from_fn(512, |s| Point::unit(s) * (1.0 + a * (k * s).cos())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normalize_area_is_idempotent(radii in prop::collection::vec(0.6f64..1.8, 4..16)) {
        let once = match normalize_area(&star(&radii), Point::ZERO) {
            Err(FlowError::FlowCollapse { .. }) => return Err(TestCaseError::reject("flow collapses")),
            r => r.unwrap(),
        };
        prop_assert!((once.area() - PI).abs() < 1e-9);
        let twice = normalize_area(&once, Point::ZERO).unwrap();
        prop_assert!((twice.area() - PI).abs() < 1e-9);
        let worst = twice.nodes().iter().map(|&p| once.signed_distance(p).abs()).fold(0.0, f64::max);
        prop_assert!(worst < 1e-9, "{worst}");
    }

    #[test]
    fn smooth_normalization_is_idempotent(a in 0.0f64..0.3, k in 2u32..6) {
        let once = normalize_area(&smooth_star(a, k as f64), Point::ZERO).unwrap();
        let twice = normalize_area(&once, Point::ZERO).unwrap();
        let worst = once.nodes().iter().zip(twice.nodes()).map(|(p, q)| p.dist(*q)).fold(0.0, f64::max);
        prop_assert!(worst < 1e-9, "{worst}");
    }

    #[test]
    fn oscillation_is_at_least_one(radii in prop::collection::vec(0.3f64..2.0, 3..30), bx in -0.1f64..0.1, by in -0.1f64..0.1) {
        let c = star(&radii);
        let base = Point::new(bx, by);
        prop_assume!(c.signed_distance(base) < -1e-6);
        prop_assert!(argument_oscillation(&c, base).unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn bound_is_nonnegative_and_monotone(levels in prop::collection::vec(0.2f64..3.0, 3..8)) {
        let mut radii = levels.clone();
        radii.sort_by(f64::total_cmp);
        radii.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
        prop_assume!(radii.len() >= 3);
        let fam = AnnulusFamily::new(
            radii.iter().map(|&r| (r, JordanCurve::circle(Point::ZERO, r, 256).unwrap())).collect(),
            Point::ZERO,
        ).unwrap();
        let u0 = radii[0];
        let mut prev = 0.0;
        for &u1 in &radii {
            let b = energy_bound(&fam, u0, u1).unwrap().bound;
            prop_assert!(b >= prev && b >= 0.0);
            prev = b;
        }
    }

    #[test]
    fn area_law_on_star_polygons(radii in prop::collection::vec(0.5f64..2.0, 3..20), t in 0.0f64..1.0) {
        let c = star(&radii);
        let r = c.nearest(Point::ZERO).distance;
        let s = -0.45 * r * r + t * 2.0;
        let out = radial_flow(&c, s, Point::ZERO).unwrap();
        prop_assert!((out.area() - c.area() - TAU * s).abs() < 1e-6);
    }
}

/// Mollified squares shrunk about the centre by `1 − 3·d_n/r`, with `d_n` the
/// sup distance to the square and `r` its inradius, are nested; the bounds
/// between successive members shrink toward zero.
#[test]
fn mollified_square_bounds_shrink() {
    let sq = JordanCurve::polygon(vec![
        Point::new(1.0, 1.0),
        Point::new(-1.0, 1.0),
        Point::new(-1.0, -1.0),
        Point::new(1.0, -1.0),
    ])
    .unwrap();
    let sq = normalize_area(&sq, Point::ZERO).unwrap();
    let r = sq.nearest(Point::ZERO).distance;
    let ns = [5u32, 10, 20, 40, 80];
    let levels: Vec<(f64, JordanCurve)> = ns
        .iter()
        .map(|&n| {
            let c = mollify(&sq, &MollifierSpec::for_curve(&sq, n)).unwrap();
            let d = sup_distance(&sq, &c, c.params());
            (
                n as f64,
                homothety(&c, Point::ZERO, 1.0 - 3.0 * d / r).unwrap(),
            )
        })
        .collect();
    let fam = AnnulusFamily::new(levels, Point::ZERO).unwrap();
    let mut prev = f64::INFINITY;
    for w in ns.windows(2) {
        let b = energy_bound(&fam, w[0] as f64, w[1] as f64).unwrap().bound;
        // doubling n halves the gap
        assert!(b > 0.0 && b < 0.6 * prev, "n = {}: {b} after {prev}", w[0]);
        prev = b;
    }
}
