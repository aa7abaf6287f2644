//! Inscribed θ-rectangles as off-diagonal zeros of the intersection residual
//! on the parameter torus.
//!
//! The search runs in stages: residual signs on an `N × N` grid over the half
//! torus `0 ≤ s2 − s1 ≤ π`, seeds at cells where both residual components
//! change sign, damped Newton refinement of each seed, and assembly (diagonal
//! rejection, clustering into families, rectangle deduplication, actions).
//! The grid and refinement stages are independent per row and per seed and
//! run through a [`ParMap`], so callers can supply a parallel executor; the
//! assembly sorts its input, so results do not depend on execution order.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::curve::{CurveKind, JordanCurve};
use crate::math::{self, PI, TAU};
use crate::point::Point;
use crate::primitive::{primitive, Primitive};
use crate::symplectic::{action_shift, r_theta, LiftValue, PairPoint, LIFT_CLOSURE_TOL};

/// Order-preserving map over `0..n`.
pub trait ParMap {
    fn map_collect<T: Send, F: Fn(usize) -> T + Sync + Send>(&self, n: usize, f: F) -> Vec<T>;
}

/// Runs everything on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl ParMap for Sequential {
    fn map_collect<T: Send, F: Fn(usize) -> T + Sync + Send>(&self, n: usize, f: F) -> Vec<T> {
        (0..n).map(f).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FinderOptions {
    /// Torus grid size `N`.
    pub grid: usize,
    /// Acceptance threshold on the residual; by default `1e-11` for sampled
    /// curves and `1e-9` for polygons.
    pub tol_accept: Option<f64>,
    /// Diagonal band, relative to the diameter.
    pub eps_diag: f64,
    /// Rectangle deduplication distance, relative to the diameter.
    pub dedup_tol: f64,
    pub max_iter: usize,
    /// Central-difference step of the Jacobian.
    pub fd_step: f64,
    /// Clusters spanning more than this many grid cells are families.
    pub family_cells: f64,
}

impl Default for FinderOptions {
    fn default() -> Self {
        FinderOptions {
            grid: 512,
            tol_accept: None,
            eps_diag: 1e-3,
            dedup_tol: 1e-6,
            max_iter: 50,
            fd_step: 1e-6,
            family_cells: 10.0,
        }
    }
}

impl FinderOptions {
    pub fn tolerance(&self, curve: &JordanCurve) -> f64 {
        self.tol_accept.unwrap_or(match curve.kind() {
            CurveKind::Samples => 1e-11,
            CurveKind::Polygon => 1e-9,
        })
    }

    fn cell(&self) -> f64 {
        TAU / self.grid as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    Diagonal,
    Nondegenerate,
}

/// A refined zero of the residual.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntersectionPoint {
    pub s1: f64,
    pub s2: f64,
    pub theta: f64,
    /// `max(|σ(w1)|, |σ(w2)|)`.
    pub residual: f64,
    /// `None` when the lift does not close or a projection is ambiguous.
    pub action: Option<LiftValue>,
    pub kind: PointKind,
}

/// Rectangle with center `m`, half diagonal `d` and diagonal angle `θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaRectangle {
    pub center: Point,
    pub half_diagonal: Point,
    pub theta: f64,
    /// `(m + d, m + e^{−iθ}d, m − d, m − e^{−iθ}d)`.
    pub vertices: [Point; 4],
}

impl ThetaRectangle {
    pub fn new(center: Point, half_diagonal: Point, theta: f64) -> Self {
        let e = half_diagonal.rotate(-theta);
        ThetaRectangle {
            center,
            half_diagonal,
            theta,
            vertices: [
                center + half_diagonal,
                center + e,
                center - half_diagonal,
                center - e,
            ],
        }
    }

    /// The rectangle spanned by `z1 = c(s1)`, `z2 = c(s2)` and their `R_θ` image.
    pub fn from_pair(theta: f64, z1: Point, z2: Point) -> Self {
        let p = PairPoint::new(z1, z2);
        Self::new(p.center(), p.half_diagonal(), theta)
    }

    /// Hausdorff distance between the vertex sets.
    pub fn hausdorff(&self, other: &ThetaRectangle) -> f64 {
        let one_way = |a: &[Point; 4], b: &[Point; 4]| {
            a.iter()
                .map(|p| b.iter().map(|q| p.dist(*q)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        one_way(&self.vertices, &other.vertices).max(one_way(&other.vertices, &self.vertices))
    }

    /// Largest distance of a vertex from the curve.
    pub fn on_curve_error(&self, curve: &JordanCurve) -> f64 {
        self.vertices
            .iter()
            .map(|&v| curve.signed_distance(v).abs())
            .fold(0.0, f64::max)
    }
}

/// A continuum of solutions found as one cluster.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Family {
    pub members: usize,
    /// Range of `s1` over the members.
    pub s1_range: (f64, f64),
}

/// One reported rectangle or family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Solution {
    pub point: IntersectionPoint,
    pub rectangle: ThetaRectangle,
    pub family: Option<Family>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FinderResult {
    pub theta: f64,
    /// Distinct nondegenerate zeros before rectangle deduplication, sorted by `(s1, s2)`.
    pub points: Vec<IntersectionPoint>,
    pub solutions: Vec<Solution>,
}

impl FinderResult {
    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    /// Smallest action over all nondegenerate zeros.
    pub fn min_action(&self) -> Option<f64> {
        self.points
            .iter()
            .filter_map(|p| p.action.map(LiftValue::value))
            .reduce(f64::min)
    }

    pub fn max_residual(&self) -> Option<f64> {
        self.points.iter().map(|p| p.residual).reduce(f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FinderError {
    InvalidTheta(f64),
    /// No off-diagonal zero at this grid resolution.
    NoSolution,
}

impl fmt::Display for FinderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinderError::InvalidTheta(t) => write!(f, "theta must lie in (0, pi), got {t}"),
            FinderError::NoSolution => {
                f.write_str("NoSolution: no off-diagonal zero found at this grid resolution")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ActionError {
    LiftNotClosed,
    ProjectionAmbiguous,
}

impl fmt::Display for ActionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionError::LiftNotClosed => {
                f.write_str("LiftNotClosed: area is not a multiple of pi")
            }
            ActionError::ProjectionAmbiguous => {
                f.write_str("ProjectionAmbiguous: image point is equidistant from two branches")
            }
        }
    }
}

/// Image pair `R_θ(c(s1), c(s2))`.
fn image(curve: &JordanCurve, theta: f64, s1: f64, s2: f64) -> PairPoint {
    r_theta(theta, PairPoint::new(curve.point(s1), curve.point(s2)))
}

/// `(σ(w1), σ(w2))` for `(w1, w2) = R_θ(c(s1), c(s2))`.
pub fn residual(curve: &JordanCurve, theta: f64, s1: f64, s2: f64) -> (f64, f64) {
    if s1 == s2 {
        // R_θ fixes coincident pairs, which lie on the curve by construction
        return (0.0, 0.0);
    }
    let w = image(curve, theta, s1, s2);
    (curve.signed_distance(w.z1), curve.signed_distance(w.z2))
}

/// `[f(s1) + f(s2) − f(s1′) − f(s2′) − Δt] mod π`, where `s1′, s2′` are the
/// parameters of the nearest points to the image pair.
pub fn action_of(
    curve: &JordanCurve,
    f: &Primitive,
    theta: f64,
    s1: f64,
    s2: f64,
) -> Result<LiftValue, ActionError> {
    let a = f.period_increment();
    if (a - PI * math::round(a / PI)).abs() >= LIFT_CLOSURE_TOL {
        return Err(ActionError::LiftNotClosed);
    }
    let p = PairPoint::new(curve.point(s1), curve.point(s2));
    let w = r_theta(theta, p);
    let n1 = curve.nearest(w.z1);
    let n2 = curve.nearest(w.z2);
    if n1.ambiguous || n2.ambiguous {
        return Err(ActionError::ProjectionAmbiguous);
    }
    let before = f.eval(s1) + f.eval(s2);
    let after = f.eval(n1.param) + f.eval(n2.param);
    Ok(LiftValue::new(before - after - action_shift(theta, p)))
}

/// Residual signs on the half torus: row `i` holds the points
/// `(s_i, s_i + k·h)` for `k = 0 .. N/2 + 2`, with `h = 2π/N`.
pub fn grid_row(curve: &JordanCurve, theta: f64, n: usize, i: usize) -> Vec<[f64; 2]> {
    let h = TAU / n as f64;
    let s1 = i as f64 * h;
    let z1 = curve.point(s1);
    (0..row_width(n))
        .map(|k| {
            let z2 = curve.point(s1 + k as f64 * h);
            let w = r_theta(theta, PairPoint::new(z1, z2));
            [
                curve.signed_distance_capped(w.z1, 0.0),
                curve.signed_distance_capped(w.z2, 0.0),
            ]
        })
        .collect()
}

fn row_width(n: usize) -> usize {
    n / 2 + 2
}

fn changes_sign(v: [f64; 4]) -> bool {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    lo <= 0.0 && hi >= 0.0
}

/// Centers of the cells `[s_i, s_{i+1}] × [s_i + kh, s_i + (k+1)h]`, `2 ≤ k ≤ N/2`,
/// in which both residual components change sign.
pub fn seeds_from_rows(n: usize, rows: &[Vec<[f64; 2]>]) -> Vec<(f64, f64)> {
    let h = TAU / n as f64;
    let mut out = Vec::new();
    for i in 0..n {
        let (r0, r1) = (&rows[i], &rows[(i + 1) % n]);
        for k in 2..=n / 2 {
            let corners = [r0[k], r0[k + 1], r1[k - 1], r1[k]];
            let hit = (0..2).all(|c| {
                changes_sign([corners[0][c], corners[1][c], corners[2][c], corners[3][c]])
            });
            if hit {
                let s1 = (i as f64 + 0.5) * h;
                out.push((s1, s1 + k as f64 * h));
            }
        }
    }
    out
}

/// A converged zero before assembly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Refined {
    pub s1: f64,
    pub s2: f64,
    pub residual: f64,
}

fn norm_inf(r: (f64, f64)) -> f64 {
    r.0.abs().max(r.1.abs())
}

/// Damped Newton from `seed` with a central-difference Jacobian; near-singular
/// Jacobians (families of zeros) take the minimum-norm least-squares step.
pub fn refine(
    curve: &JordanCurve,
    theta: f64,
    seed: (f64, f64),
    opts: &FinderOptions,
) -> Option<Refined> {
    let tol = opts.tolerance(curve);
    let h = opts.fd_step;
    let (mut s1, mut s2) = seed;
    let mut r = residual(curve, theta, s1, s2);
    let mut norm = norm_inf(r);
    for _ in 0..opts.max_iter {
        if norm < tol {
            break;
        }
        let a = residual(curve, theta, s1 + h, s2);
        let b = residual(curve, theta, s1 - h, s2);
        let c = residual(curve, theta, s1, s2 + h);
        let d = residual(curve, theta, s1, s2 - h);
        let j11 = (a.0 - b.0) / (2.0 * h);
        let j21 = (a.1 - b.1) / (2.0 * h);
        let j12 = (c.0 - d.0) / (2.0 * h);
        let j22 = (c.1 - d.1) / (2.0 * h);
        let scale = j11 * j11 + j12 * j12 + j21 * j21 + j22 * j22;
        if !scale.is_finite() || scale <= 0.0 {
            return None;
        }
        let det = j11 * j22 - j12 * j21;
        let (mut d1, mut d2) = if det.abs() > 1e-6 * scale {
            (
                (-j22 * r.0 + j12 * r.1) / det,
                (j21 * r.0 - j11 * r.1) / det,
            )
        } else {
            // δ = −Jᵀ (J Jᵀ + μ I)⁻¹ r
            let mu = 1e-12 * scale;
            let m11 = j11 * j11 + j12 * j12 + mu;
            let m12 = j11 * j21 + j12 * j22;
            let m22 = j21 * j21 + j22 * j22 + mu;
            let md = m11 * m22 - m12 * m12;
            let y1 = (m22 * r.0 - m12 * r.1) / md;
            let y2 = (-m12 * r.0 + m11 * r.1) / md;
            (-(j11 * y1 + j21 * y2), -(j12 * y1 + j22 * y2))
        };
        let len = d1.abs().max(d2.abs());
        if len > 0.5 {
            d1 *= 0.5 / len;
            d2 *= 0.5 / len;
        }
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let t1 = s1 + lambda * d1;
            let t2 = s2 + lambda * d2;
            let rt = residual(curve, theta, t1, t2);
            let nt = norm_inf(rt);
            if nt < norm {
                s1 = t1;
                s2 = t2;
                r = rt;
                norm = nt;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (norm < tol).then_some(Refined {
        s1: math::wrap_tau(s1),
        s2: math::wrap_tau(s2),
        residual: norm,
    })
}

/// `(s1, s2)` with `s1 ≤ s2`, both in `[0, 2π)`.
fn canonical(s1: f64, s2: f64) -> (f64, f64) {
    let (a, b) = (math::wrap_tau(s1), math::wrap_tau(s2));
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Torus distance (max norm) up to swapping the coordinates.
fn pair_distance(p: (f64, f64), q: (f64, f64)) -> f64 {
    let d = |a: f64, b: f64| math::circular_distance(a, b, TAU);
    let straight = d(p.0, q.0).max(d(p.1, q.1));
    let swapped = d(p.0, q.1).max(d(p.1, q.0));
    straight.min(swapped)
}

fn find_root(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Diagonal rejection, clustering, family detection, deduplication and actions.
pub fn assemble(
    curve: &JordanCurve,
    f: Option<&Primitive>,
    theta: f64,
    refined: &[Refined],
    opts: &FinderOptions,
) -> FinderResult {
    let diam = curve.diameter();
    let mut pts: Vec<Refined> = refined
        .iter()
        .map(|r| {
            let (s1, s2) = canonical(r.s1, r.s2);
            Refined {
                s1,
                s2,
                residual: r.residual,
            }
        })
        .filter(|r| curve.point(r.s1).dist(curve.point(r.s2)) > opts.eps_diag * diam)
        .collect();
    pts.sort_by(|a, b| {
        a.s1.total_cmp(&b.s1)
            .then(a.s2.total_cmp(&b.s2))
            .then(a.residual.total_cmp(&b.residual))
    });

    // merge repeated convergence to the same zero
    let mut distinct: Vec<Refined> = Vec::with_capacity(pts.len());
    for p in pts {
        if let Some(q) = distinct
            .iter_mut()
            .rev()
            .take(8)
            .find(|q| pair_distance((q.s1, q.s2), (p.s1, p.s2)) < 1e-9)
        {
            if p.residual < q.residual {
                *q = p;
            }
        } else {
            distinct.push(p);
        }
    }

    let points: Vec<IntersectionPoint> = distinct
        .iter()
        .map(|r| IntersectionPoint {
            s1: r.s1,
            s2: r.s2,
            theta,
            residual: r.residual,
            action: f.and_then(|f| action_of(curve, f, theta, r.s1, r.s2).ok()),
            kind: PointKind::Nondegenerate,
        })
        .collect();

    let m = points.len();
    let link = 2.0 * opts.cell();
    let mut parent: Vec<usize> = (0..m).collect();
    for i in 0..m {
        for j in i + 1..m {
            if pair_distance((points[i].s1, points[i].s2), (points[j].s1, points[j].s2)) < link {
                let (a, b) = (find_root(&mut parent, i), find_root(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); m];
    for i in 0..m {
        let r = find_root(&mut parent, i);
        clusters[r].push(i);
    }

    let rect = |p: &IntersectionPoint| {
        ThetaRectangle::from_pair(theta, curve.point(p.s1), curve.point(p.s2))
    };
    let mut solutions: Vec<Solution> = Vec::new();
    for members in clusters.into_iter().filter(|c| !c.is_empty()) {
        let first = &points[members[0]];
        let span = members
            .iter()
            .map(|&k| pair_distance((first.s1, first.s2), (points[k].s1, points[k].s2)))
            .fold(0.0, f64::max);
        if span > opts.family_cells * opts.cell() {
            let lo = members
                .iter()
                .map(|&k| points[k].s1)
                .fold(f64::INFINITY, f64::min);
            let hi = members
                .iter()
                .map(|&k| points[k].s1)
                .fold(f64::NEG_INFINITY, f64::max);
            solutions.push(Solution {
                point: *first,
                rectangle: rect(first),
                family: Some(Family {
                    members: members.len(),
                    s1_range: (lo, hi),
                }),
            });
        } else {
            for &k in &members {
                let r = rect(&points[k]);
                let dup = solutions.iter().any(|s| {
                    s.family.is_none() && s.rectangle.hausdorff(&r) < opts.dedup_tol * diam
                });
                if !dup {
                    solutions.push(Solution {
                        point: points[k],
                        rectangle: r,
                        family: None,
                    });
                }
            }
        }
    }
    // rectangles seen from their other diagonal land in other clusters
    let mut kept: Vec<Solution> = Vec::with_capacity(solutions.len());
    for s in solutions {
        if s.family.is_none()
            && kept.iter().any(|k| {
                k.family.is_none() && k.rectangle.hausdorff(&s.rectangle) < opts.dedup_tol * diam
            })
        {
            continue;
        }
        kept.push(s);
    }
    kept.sort_by(|a, b| {
        a.point
            .s1
            .total_cmp(&b.point.s1)
            .then(a.point.s2.total_cmp(&b.point.s2))
    });
    FinderResult {
        theta,
        points,
        solutions: kept,
    }
}

fn check_theta(theta: f64) -> Result<(), FinderError> {
    if theta > 0.0 && theta < PI {
        Ok(())
    } else {
        Err(FinderError::InvalidTheta(theta))
    }
}

/// Primitive used for actions, or `None` when the lift does not close.
pub fn closed_primitive(curve: &JordanCurve) -> Option<Primitive> {
    let f = primitive(curve);
    let a = f.period_increment();
    ((a - PI * math::round(a / PI)).abs() < LIFT_CLOSURE_TOL).then_some(f)
}

/// All stages for one `θ`, with extra seeds (continuation) appended to the grid seeds.
pub fn find_with<P: ParMap>(
    curve: &JordanCurve,
    f: Option<&Primitive>,
    theta: f64,
    opts: &FinderOptions,
    extra_seeds: &[(f64, f64)],
    exec: &P,
) -> Result<FinderResult, FinderError> {
    check_theta(theta)?;
    let n = opts.grid.max(8);
    let rows = exec.map_collect(n, |i| grid_row(curve, theta, n, i));
    let mut seeds = seeds_from_rows(n, &rows);
    seeds.extend_from_slice(extra_seeds);
    let refined: Vec<Refined> = exec
        .map_collect(seeds.len(), |k| refine(curve, theta, seeds[k], opts))
        .into_iter()
        .flatten()
        .collect();
    Ok(assemble(curve, f, theta, &refined, opts))
}

/// Find inscribed θ-rectangles; `NoSolution` when none is found.
pub fn find_rectangles(
    curve: &JordanCurve,
    theta: f64,
    opts: &FinderOptions,
) -> Result<FinderResult, FinderError> {
    let f = closed_primitive(curve);
    let out = find_with(curve, f.as_ref(), theta, opts, &[], &Sequential)?;
    if out.is_empty() {
        Err(FinderError::NoSolution)
    } else {
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    /// Rectangles, each family counted once.
    pub count: usize,
    pub min_action: Option<f64>,
    pub max_residual: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

/// Run the finder over a θ grid in increasing order, seeding each `θ` with
/// the zeros found at the previous one.
pub fn sweep_with<P: ParMap>(
    curve: &JordanCurve,
    thetas: &[f64],
    opts: &FinderOptions,
    exec: &P,
) -> Result<SweepTable, FinderError> {
    let mut grid = thetas.to_vec();
    grid.sort_by(f64::total_cmp);
    let f = closed_primitive(curve);
    let mut warm: Vec<(f64, f64)> = Vec::new();
    let mut rows = Vec::with_capacity(grid.len());
    for &theta in &grid {
        let res = find_with(curve, f.as_ref(), theta, opts, &warm, exec)?;
        warm = res.points.iter().map(|p| (p.s1, p.s2)).collect();
        rows.push(SweepRow {
            theta,
            count: res.solutions.len(),
            min_action: res.min_action(),
            max_residual: res.max_residual(),
        });
    }
    Ok(SweepTable { rows })
}

pub fn sweep_theta(
    curve: &JordanCurve,
    thetas: &[f64],
    opts: &FinderOptions,
) -> Result<SweepTable, FinderError> {
    sweep_with(curve, thetas, opts, &Sequential)
}
