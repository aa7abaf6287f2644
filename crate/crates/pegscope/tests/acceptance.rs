//! Acceptance criteria, one PASS/FAIL line each.

use std::f64::consts::{PI, TAU};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use pegscope_core::annulus::{energy_bound, AnnulusFamily};
use pegscope_core::finder::{find_rectangles, FinderOptions, PointKind};
use pegscope_core::flow::{normalize_area, radial_flow};
use pegscope_core::mollify::{mollify, sup_distance, MollifierSpec};
use pegscope_core::monotone::{is_locally_monotone, primitive_monotone, Monotonicity};
use pegscope_core::primitive::primitive;
use pegscope_core::spectrum::{
    action_spectrum, bottleneck, circle_barcode, classify_strip, RegionShape,
};
use pegscope_core::symplectic::{action_shift, r_theta, PairPoint};
use pegscope_core::{JordanCurve, Point};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn unit_circle() -> JordanCurve {
    JordanCurve::circle(Point::ZERO, 1.0, 1024).unwrap()
}

fn circle_table() -> Outcome {
    let c = unit_circle();
    let opts = FinderOptions::default();
    let mut slowest = 0.0f64;
    for theta in [PI / 6.0, PI / 4.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0] {
        let start = Instant::now();
        let values = action_spectrum(&c, theta, &opts).map_err(|e| e.to_string())?;
        let secs = start.elapsed().as_secs_f64();
        slowest = slowest.max(secs);
        ensure(secs < 5.0, format!("θ = {theta}: {secs:.2} s"))?;
        ensure(
            values.len() == 2,
            format!("θ = {theta}: {} values", values.len()),
        )?;
        ensure(
            values.iter().any(|a| a.distance_to(0.0) < 1e-6),
            format!("θ = {theta}: 0 missing"),
        )?;
        ensure(
            values.iter().any(|a| a.distance_to(theta) < 1e-6),
            format!("θ = {theta}: θ missing"),
        )?;
    }
    Ok(format!(
        "spectrum {{0, θ}} at 5 angles, slowest {slowest:.2} s"
    ))
}

fn circle_action_law() -> Outcome {
    let c = unit_circle();
    let opts = FinderOptions::default();
    let (mut worst_action, mut worst_res, mut count) = (0.0f64, 0.0f64, 0usize);
    for k in 1..=64 {
        let theta = k as f64 * PI / 65.0;
        let res = find_rectangles(&c, theta, &opts).map_err(|e| format!("θ = {theta}: {e}"))?;
        for p in res
            .points
            .iter()
            .filter(|p| p.kind == PointKind::Nondegenerate)
        {
            let a = p.action.ok_or(format!("θ = {theta}: action missing"))?;
            worst_action = worst_action.max(a.distance_to(theta));
            worst_res = worst_res.max(p.residual);
            count += 1;
        }
    }
    ensure(
        worst_action < 1e-6,
        format!("action error {worst_action:e}"),
    )?;
    ensure(worst_res < 1e-11, format!("residual {worst_res:e}"))?;
    Ok(format!(
        "{count} solutions, action error {worst_action:.1e}, residual {worst_res:.1e}"
    ))
}

fn ellipse_square() -> Outcome {
    let e = JordanCurve::ellipse(2.0, 1.0, 1024).unwrap();
    let res =
        find_rectangles(&e, PI / 2.0, &FinderOptions::default()).map_err(|e| e.to_string())?;
    ensure(
        res.solutions.len() == 1,
        format!("{} rectangles", res.solutions.len()),
    )?;
    let t = 2.0 / 5f64.sqrt();
    let mut corners: Vec<(i32, i32)> = Vec::new();
    let mut worst = 0.0f64;
    for v in res.solutions[0].rectangle.vertices {
        worst = worst.max((v.x.abs() - t).abs()).max((v.y.abs() - t).abs());
        corners.push((v.x.signum() as i32, v.y.signum() as i32));
    }
    corners.sort();
    ensure(
        corners == [(-1, -1), (-1, 1), (1, -1), (1, 1)],
        "vertices not in all four quadrants",
    )?;
    ensure(worst < 1e-8, format!("vertex error {worst:e}"))?;
    Ok(format!("one square, vertex error {worst:.1e}"))
}

/// Regions containing `(t, θ)`, listed from the interval definitions.
fn regions_oracle(t: f64, theta: f64) -> Vec<(RegionShape, i64)> {
    let mut out = Vec::new();
    for n in -8i64..=8 {
        let nf = n as f64;
        if nf * PI < t && t <= nf * PI + theta {
            out.push((RegionShape::Upper, n));
        }
        if (nf - 1.0) * PI + theta < t && t <= nf * PI {
            out.push((RegionShape::Lower, n));
        }
    }
    out
}

fn strip_classifier() -> Outcome {
    let spots = [
        (PI / 4.0, PI / 2.0, RegionShape::Upper, 0, (1, 2)),
        (3.0 * PI / 4.0, PI / 2.0, RegionShape::Lower, 1, (2, 3)),
        (-PI / 4.0, PI / 2.0, RegionShape::Lower, 0, (0, 1)),
    ];
    for (t, theta, shape, n, deg) in spots {
        let r = classify_strip(t, theta).map_err(|e| e.to_string())?;
        ensure(
            r.shape == shape && r.n == n && r.hom_degrees == deg,
            format!("spot ({t}, {theta}): {r:?}"),
        )?;
    }
    let mut rng = StdRng::seed_from_u64(4);
    for _ in 0..100_000 {
        let t = rng.gen_range(-20.0..20.0);
        let theta = rng.gen_range(1e-9..PI);
        let expect = regions_oracle(t, theta);
        ensure(
            expect.len() == 1,
            format!("oracle found {} regions at ({t}, {theta})", expect.len()),
        )?;
        let r = classify_strip(t, theta).map_err(|e| format!("({t}, {theta}): {e}"))?;
        ensure(
            (r.shape, r.n) == expect[0],
            format!("({t}, {theta}): {r:?} vs {:?}", expect[0]),
        )?;
        let deg = match r.shape {
            RegionShape::Upper => (2 * r.n + 1, 2 * r.n + 2),
            RegionShape::Lower => (2 * r.n, 2 * r.n + 1),
        };
        ensure(
            r.hom_degrees == deg,
            format!("({t}, {theta}): degrees {:?}", r.hom_degrees),
        )?;
    }
    Ok("spot set and 100000 random points".into())
}

fn circle_barcodes() -> Outcome {
    let n = 2;
    for theta in [PI / 6.0, PI / 3.0, PI / 2.0, 2.5] {
        let b = circle_barcode(theta, n);
        ensure(
            b.len() == 2 * (2 * n + 1),
            format!("θ = {theta}: {} bars", b.len()),
        )?;
        let (mut zero, mut at_theta) = (0, 0);
        for bar in b.bars() {
            ensure(
                (bar.length() - PI).abs() < 1e-12,
                format!("bar length {}", bar.length()),
            )?;
            for x in [bar.birth, bar.death] {
                let m = x.rem_euclid(PI);
                let near = |y: f64| (m - y).abs().min(PI - (m - y).abs()) < 1e-12;
                if near(0.0) {
                    zero += 1;
                } else if near(theta) {
                    at_theta += 1;
                } else {
                    return Err(format!("endpoint {x} mod π is neither 0 nor θ"));
                }
            }
        }
        ensure(
            zero == at_theta && zero > 0,
            format!("endpoint classes {zero}, {at_theta}"),
        )?;
    }
    let d = bottleneck(&circle_barcode(PI / 3.0, n), &circle_barcode(PI / 2.0, n));
    ensure((d - PI / 6.0).abs() < 1e-12, format!("bottleneck {d}"))?;
    Ok(format!(
        "2(2N+1) bars of length π, bottleneck error {:.1e}",
        (d - PI / 6.0).abs()
    ))
}

fn shoelace(p: &[Point]) -> f64 {
    let n = p.len();
    0.5 * (0..n)
        .map(|i| p[i].x * p[(i + 1) % n].y - p[(i + 1) % n].x * p[i].y)
        .sum::<f64>()
}

fn segment_distance(z: Point, a: Point, b: Point) -> f64 {
    let e = b - a;
    let t = ((z - a).dot(e) / e.dot(e)).clamp(0.0, 1.0);
    z.dist(a + e * t)
}

fn area_law() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let m = rng.gen_range(3..24);
        let v: Vec<Point> = (0..m)
            .map(|k| {
                Point::unit(TAU * (k as f64 + rng.gen_range(0.0..0.4)) / m as f64)
                    * rng.gen_range(0.5..2.0)
            })
            .collect();
        let poly = JordanCurve::polygon(v.clone()).map_err(|e| e.to_string())?;
        let r = (0..m)
            .map(|i| segment_distance(Point::ZERO, v[i], v[(i + 1) % m]))
            .fold(f64::INFINITY, f64::min);
        let s = rng.gen_range(-0.45 * r * r..1.5);
        let out = radial_flow(&poly, s, Point::ZERO).map_err(|e| format!("s = {s}: {e}"))?;
        worst = worst.max((shoelace(out.nodes()) - shoelace(&v) - TAU * s).abs());
    }
    ensure(worst < 1e-6, format!("area law error {worst:e}"))?;
    let c = JordanCurve::circle(Point::ZERO, 2.0, 256).unwrap();
    let out = radial_flow(&c, -1.5, Point::ZERO).map_err(|e| e.to_string())?;
    let dev = out
        .nodes()
        .iter()
        .map(|p| (p.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    ensure(dev < 1e-12, format!("circle r=2 radius error {dev:e}"))?;
    Ok(format!(
        "1000 star polygons, area error {worst:.1e}, circle error {dev:.1e}"
    ))
}

/// Adaptive Simpson quadrature.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    /// `x = [left, mid, right]`, `y = f(x)`.
    fn step(
        f: &dyn Fn(f64) -> f64,
        x: [f64; 3],
        y: [f64; 3],
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let [a, m, b] = x;
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (y[0] + 4.0 * flm + y[1]);
        let right = (b - m) / 6.0 * (y[1] + 4.0 * frm + y[2]);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            left + right + diff / 15.0
        } else {
            step(f, [a, lm, m], [y[0], flm, y[1]], left, 0.5 * tol, depth - 1)
                + step(
                    f,
                    [m, rm, b],
                    [y[1], frm, y[2]],
                    right,
                    0.5 * tol,
                    depth - 1,
                )
        }
    }
    let m = 0.5 * (a + b);
    let y = [f(a), f(m), f(b)];
    let whole = (b - a) / 6.0 * (y[0] + 4.0 * y[1] + y[2]);
    step(f, [a, m, b], y, whole, tol, 40)
}

fn action_shift_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let (mut worst, mut worst_period) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let mut pt = || Point::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let p = PairPoint::new(pt(), pt());
        let theta = rng.gen_range(0.0..TAU);
        // (Δξ² − Δx²) / 4 along the orbit
        let integrand = |s: f64| {
            let q = r_theta(s, p);
            let d = q.z1 - q.z2;
            0.25 * (d.y * d.y - d.x * d.x)
        };
        let quad = if theta > 0.0 {
            simpson(&integrand, 0.0, theta, 1e-13)
        } else {
            0.0
        };
        worst = worst.max((action_shift(theta, p) - quad).abs());
        worst_period = worst_period.max(action_shift(TAU, p).abs());
    }
    ensure(worst < 1e-10, format!("quadrature mismatch {worst:e}"))?;
    ensure(worst_period < 1e-12, format!("Δt(2π) = {worst_period:e}"))?;
    Ok(format!(
        "1000 samples, mismatch {worst:.1e}, Δt(2π) {worst_period:.1e}"
    ))
}

fn mollification() -> Outcome {
    let h = 0.5;
    let sq = JordanCurve::polygon(vec![
        Point::new(h, h),
        Point::new(-h, h),
        Point::new(-h, -h),
        Point::new(h, -h),
    ])
    .unwrap();
    let sq = normalize_area(&sq, Point::ZERO).map_err(|e| e.to_string())?;
    let opts = FinderOptions::default();
    let mut prims = Vec::new();
    let mut found = 0;
    for n in [10u32, 20, 40, 80] {
        let cn =
            mollify(&sq, &MollifierSpec::for_curve(&sq, n)).map_err(|e| format!("n = {n}: {e}"))?;
        let d = sup_distance(&sq, &cn, cn.params());
        ensure(d < 1.0 / n as f64, format!("n = {n}: sup distance {d}"))?;
        prims.push((n, primitive(&cn), cn.params().to_vec()));
        let normalized = normalize_area(&cn, Point::ZERO).map_err(|e| format!("n = {n}: {e}"))?;
        for theta in [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0] {
            let res = find_rectangles(&normalized, theta, &opts)
                .map_err(|e| format!("n = {n}, θ = {theta}: {e}"))?;
            let good = res.points.iter().any(|p| {
                p.kind == PointKind::Nondegenerate
                    && p.action
                        .is_some_and(|a| a.value() > 1e-6 && a.value() < PI - 1e-6)
            });
            ensure(
                good,
                format!("n = {n}, θ = {theta}: no solution with action in (0, π)"),
            )?;
            found += 1;
        }
    }
    let mut prev = f64::INFINITY;
    let mut diffs = Vec::new();
    for w in prims.windows(2) {
        let (n, f, grid) = (&w[0].0, &w[0].1, &w[0].2);
        let g = &w[1].1;
        let d = grid
            .iter()
            .map(|&s| (f.eval(s) - g.eval(s)).abs())
            .fold(0.0, f64::max);
        ensure(
            d < prev && d < 2.0 / *n as f64,
            format!("n = {n}: primitive difference {d}"),
        )?;
        prev = d;
        diffs.push(format!("{d:.1e}"));
    }
    Ok(format!(
        "{found} (n, θ) cases solved, primitive differences {}",
        diffs.join(" > ")
    ))
}

fn energy_bounds() -> Outcome {
    let c = |r: f64| JordanCurve::circle(Point::ZERO, r, 1024).unwrap();
    let mut levels = vec![(0.9, c(0.9)), (1.0, c(1.0))];
    let gaps: Vec<f64> = (1..=10).map(|k| 0.1 / (k as f64 + 1.0)).collect();
    for &g in &gaps {
        levels.push((0.9 + g, c(0.9 + g)));
    }
    let fam = AnnulusFamily::new(levels, Point::ZERO).map_err(|e| e.to_string())?;
    let b = energy_bound(&fam, 0.9, 1.0).map_err(|e| e.to_string())?;
    let expect = 2.0 * (2.0 + 1.0) * (PI * 1.0 - PI * 0.81);
    ensure(
        (b.bound - expect).abs() < 1e-9,
        format!("bound {} vs {expect}", b.bound),
    )?;
    ensure((expect - 1.14 * PI).abs() < 1e-12, "oracle mismatch")?;
    let mut prev = b.bound;
    for &g in &gaps {
        let x = energy_bound(&fam, 0.9, 0.9 + g)
            .map_err(|e| e.to_string())?
            .bound;
        ensure(
            x >= 0.0 && x < prev,
            format!("gap {g}: bound {x} not below {prev}"),
        )?;
        prev = x;
    }
    let zero = energy_bound(&fam, 0.9, 0.9)
        .map_err(|e| e.to_string())?
        .bound;
    ensure(
        zero == 0.0 && prev < 0.1 * b.bound,
        format!("bounds do not shrink: last {prev}"),
    )?;
    Ok(format!(
        "bound error {:.1e}, last of 10 shrinking gaps {prev:.3}",
        (b.bound - expect).abs()
    ))
}

fn variance(d: &[f64]) -> f64 {
    let mean = d.iter().sum::<f64>() / d.len() as f64;
    d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / d.len() as f64
}

fn primitive_anchors() -> Outcome {
    let c = unit_circle();
    let f = primitive(&c);
    let f_std = |s: f64| 0.5 * s - 0.25 * (2.0 * s).sin();
    let worst = c
        .params()
        .iter()
        .map(|&s| (f.eval(s) - f_std(s)).abs())
        .fold(0.0, f64::max);
    ensure(
        c.params().len() == 1024 && worst < 1e-10,
        format!("f_std deviation {worst:e}"),
    )?;
    let sq = JordanCurve::polygon(vec![
        Point::new(1.0, 1.0),
        Point::new(-1.0, 1.0),
        Point::new(-1.0, -1.0),
        Point::new(1.0, -1.0),
    ])
    .unwrap();
    let mut vars = Vec::new();
    for (curve, width) in [(&c, 0.5), (&sq, 0.2)] {
        let Monotonicity::Monotone(ws) = is_locally_monotone(curve, width) else {
            return Err("curve not locally monotone".into());
        };
        let g = primitive_monotone(curve, &ws).map_err(|e| e.to_string())?;
        let f = primitive(curve);
        let d: Vec<f64> = g.grid().iter().map(|&s| g.eval(s) - f.eval(s)).collect();
        let v = variance(&d);
        ensure(v < 1e-16, format!("variance {v:e}"))?;
        vars.push(format!("{v:.1e}"));
    }
    Ok(format!(
        "f_std deviation {worst:.1e}, variances {}",
        vars.join(", ")
    ))
}

fn run_cli(dir: &Path, threads: &str, args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_pegscope"))
        .args(args)
        .current_dir(dir)
        .env("PEGSCOPE_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let setup: [&[&str]; 4] = [
        &["gen", "circle", "--out", "circle.json"],
        &[
            "gen",
            "ellipse",
            "--a",
            "2",
            "--b",
            "1",
            "--out",
            "ellipse.json",
        ],
        &[
            "gen",
            "polygon",
            "--vertices",
            "1,1;-1,1;-1,-1;1,-1",
            "--area-pi",
            "--out",
            "square.json",
        ],
        &["gen", "circle", "--radius", "0.9", "--out", "inner.json"],
    ];
    for args in setup {
        let (code, _) = run_cli(d, "1", args)?;
        ensure(code == 0, format!("{args:?} exited {code}"))?;
    }
    run_cli(
        d,
        "1",
        &[
            "find",
            "--in",
            "ellipse.json",
            "--theta",
            "pi/2",
            "--out",
            "rects.csv",
        ],
    )?;
    let commands: [&[&str]; 10] = [
        &["gen", "ellipse", "--a", "2", "--b", "1", "--area-pi"],
        &["gen", "mollified-square", "--index", "10", "--area-pi"],
        &["find", "--in", "ellipse.json", "--theta", "pi/2"],
        &["find", "--in", "square.json", "--theta", "pi/4"],
        &[
            "sweep",
            "--in",
            "square.json",
            "--grid",
            "11",
            "--torus",
            "128",
        ],
        &["spectrum", "--in", "circle.json", "--theta", "pi/3"],
        &[
            "spectrum",
            "--barcode",
            "--theta",
            "pi/3",
            "--versus",
            "pi/2",
        ],
        &[
            "classify",
            "--t",
            "0.7853981633974483",
            "--theta",
            "1.5707963267948966",
        ],
        &[
            "bound",
            "--curve",
            "0.9=inner.json",
            "--curve",
            "1=circle.json",
        ],
        &["plot", "--in", "ellipse.json", "--rects", "rects.csv"],
    ];
    for args in commands {
        let reference = run_cli(d, "1", args)?;
        ensure(
            reference.0 == 0 && !reference.1.is_empty(),
            format!("{args:?} exited {}", reference.0),
        )?;
        for threads in ["1", "8", "8"] {
            let again = run_cli(d, threads, args)?;
            ensure(
                again == reference,
                format!("{args:?} differs with {threads} threads"),
            )?;
        }
    }
    Ok(format!(
        "{} commands byte-identical over 4 runs each",
        commands.len()
    ))
}

fn main() {
    let criteria: [(&str, Check); 11] = [
        ("circle intersection table", circle_table),
        ("circle action law", circle_action_law),
        ("ellipse square", ellipse_square),
        ("strip classifier", strip_classifier),
        ("circle barcode", circle_barcodes),
        ("radial flow area law", area_law),
        ("action shift oracle", action_shift_oracle),
        ("mollification", mollification),
        ("energy bound", energy_bounds),
        ("primitive anchors", primitive_anchors),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
