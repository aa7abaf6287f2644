//! The `pegscope` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pegscope_core::annulus::{energy_bound, AnnulusFamily};
use pegscope_core::finder::{closed_primitive, find_with, sweep_with, FinderError, FinderOptions};
use pegscope_core::flow::{normalize_area, pole_of_inaccessibility, scale_to_area_pi, FlowError};
use pegscope_core::mollify::{mollify, MollifierSpec};
use pegscope_core::spectrum::{
    bottleneck, circle_barcode, classify_strip, spectrum_of, SpectrumError,
};
use pegscope_core::symplectic::{verify_lift_closure, LiftClosure, LiftValue};
use pegscope_core::{JordanCurve, Point};

use crate::curve_file::{curve_to_json, read_curve};
use crate::format::fmt17;
use crate::par::{threads_from_env, with_pool, Rayon};
use crate::svg;
use crate::tables;

#[derive(Parser, Debug)]
#[command(
    name = "pegscope",
    version,
    about = "Inscribed theta-rectangles in Jordan curves"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a test curve as JSON.
    Gen(GenArgs),
    /// Find inscribed theta-rectangles.
    Find(FindArgs),
    /// Run the finder over a grid of angles.
    Sweep(SweepArgs),
    /// Action spectrum of a curve, or the circle's reference barcode.
    Spectrum(SpectrumArgs),
    /// Strip region and Hom degrees of a point (t, theta).
    Classify(ClassifyArgs),
    /// Energy bound between two level curves of a nested family.
    Bound(BoundArgs),
    /// Draw a curve and rectangles as SVG.
    Plot(PlotArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Circle,
    Ellipse,
    Polygon,
    MollifiedSquare,
    PerturbedCircle,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(value_enum)]
    shape: Shape,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, value_parser = parse_point, default_value = "0,0")]
    center: Point,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    /// Polygon vertices as "x,y;x,y;...".
    #[arg(long)]
    vertices: Option<String>,
    /// Number of samples for sampled shapes.
    #[arg(long, default_value_t = 1024)]
    samples: usize,
    /// Mollifier index n (kernel scale chosen so that the curve moves less than 1/n).
    #[arg(long, default_value_t = 20)]
    index: u32,
    /// Side of the square before normalization.
    #[arg(long, default_value_t = 2.0)]
    side: f64,
    #[arg(long, default_value_t = 0.1)]
    amplitude: f64,
    #[arg(long, default_value_t = 3)]
    mode: u32,
    /// Rescale the enclosed area to pi with the radial flow.
    #[arg(long)]
    area_pi: bool,
    /// Base point of the radial flow.
    #[arg(long, value_parser = parse_point)]
    base: Option<Point>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FinderFlags {
    /// Torus grid size N.
    #[arg(long = "torus", default_value_t = 512)]
    torus: usize,
    /// Residual acceptance threshold.
    #[arg(long)]
    tol: Option<f64>,
}

impl FinderFlags {
    fn options(&self) -> Result<FinderOptions, CliError> {
        if self.torus < 8 {
            return Err(CliError::Usage("--torus must be at least 8".into()));
        }
        Ok(FinderOptions {
            grid: self.torus,
            tol_accept: self.tol,
            ..FinderOptions::default()
        })
    }
}

#[derive(Args, Debug)]
struct FindArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    theta: f64,
    #[command(flatten)]
    finder: FinderFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Number K of angles k*pi/(K+1), k = 1..K.
    #[arg(long, conflicts_with = "thetas")]
    grid: Option<usize>,
    /// Explicit angles, comma separated.
    #[arg(long)]
    thetas: Option<String>,
    #[command(flatten)]
    finder: FinderFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long = "in", required_unless_present = "barcode")]
    input: Option<PathBuf>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    theta: f64,
    /// Emit the unit circle's barcode instead.
    #[arg(long)]
    barcode: bool,
    /// Barcode index window N.
    #[arg(long, default_value_t = 2)]
    window: usize,
    /// With --barcode: bottleneck distance to the barcode at this angle.
    #[arg(long, value_parser = parse_angle, requires = "barcode", allow_hyphen_values = true)]
    versus: Option<f64>,
    #[command(flatten)]
    finder: FinderFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    t: f64,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    theta: f64,
}

#[derive(Args, Debug)]
struct BoundArgs {
    /// Level curve as "u=FILE"; give at least two.
    #[arg(long = "curve", value_parser = parse_level, required = true)]
    curves: Vec<(f64, PathBuf)>,
    #[arg(long, allow_hyphen_values = true)]
    u0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    u1: Option<f64>,
    #[arg(long, value_parser = parse_point)]
    base: Option<Point>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Finder CSV with rectangle vertices.
    #[arg(long)]
    rects: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad flags or unreadable input: exit 2.
    Usage(String),
    /// The operation ran and failed: exit 1.
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => m,
        }
    }
}

/// Bytes for the output destination, diagnostics and the exit code.
struct Report {
    data: Vec<u8>,
    out: Option<PathBuf>,
    notes: Vec<String>,
    code: i32,
}

impl Report {
    fn ok(data: Vec<u8>, out: Option<PathBuf>) -> Self {
        Report {
            data,
            out,
            notes: Vec::new(),
            code: 0,
        }
    }
}

/// Radians, or multiples of pi written as "pi", "pi/3", "2pi/3", "-3*pi/4".
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t: String = s
        .trim()
        .to_ascii_lowercase()
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    if let Ok(x) = t.parse::<f64>() {
        return if x.is_finite() {
            Ok(x)
        } else {
            Err(format!("not a finite angle: {s}"))
        };
    }
    let bad = || format!("cannot parse angle {s:?}; use radians or forms like pi/3, 2pi/3");
    let (neg, rest) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t.strip_prefix('+').unwrap_or(&t)),
    };
    let at = rest.find("pi").ok_or_else(bad)?;
    let coef = rest[..at].trim_end_matches('*');
    let coef = if coef.is_empty() {
        1.0
    } else {
        coef.parse::<f64>().map_err(|_| bad())?
    };
    let tail = &rest[at + 2..];
    let denom = if tail.is_empty() {
        1.0
    } else {
        tail.strip_prefix('/')
            .ok_or_else(bad)?
            .parse::<f64>()
            .map_err(|_| bad())?
    };
    let v = coef * std::f64::consts::PI / denom;
    if !v.is_finite() {
        return Err(bad());
    }
    Ok(if neg { -v } else { v })
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected x,y, got {s:?}"))?;
    let x: f64 = x
        .trim()
        .parse()
        .map_err(|_| format!("bad coordinate {x:?}"))?;
    let y: f64 = y
        .trim()
        .parse()
        .map_err(|_| format!("bad coordinate {y:?}"))?;
    Ok(Point::new(x, y))
}

fn parse_level(s: &str) -> Result<(f64, PathBuf), String> {
    let (u, path) = s
        .split_once('=')
        .ok_or_else(|| format!("expected u=FILE, got {s:?}"))?;
    let u: f64 = u.trim().parse().map_err(|_| format!("bad level {u:?}"))?;
    Ok((u, PathBuf::from(path)))
}

fn parse_vertices(s: &str) -> Result<Vec<Point>, CliError> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse_point(p).map_err(CliError::Usage))
        .collect()
}

fn load(path: &Path) -> Result<JordanCurve, CliError> {
    read_curve(path)
        .map(|(c, _)| c)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn finder_error(e: FinderError) -> CliError {
    match e {
        FinderError::InvalidTheta(_) => CliError::Usage(e.to_string()),
        FinderError::NoSolution => CliError::Failed(e.to_string()),
    }
}

fn lift_note(curve: &JordanCurve) -> Option<String> {
    match verify_lift_closure(curve) {
        LiftClosure::Closed => None,
        LiftClosure::Violation(v) => Some(format!(
            "note: area {} is {} away from a multiple of pi; actions are unavailable",
            fmt17(curve.area()),
            fmt17(v)
        )),
    }
}

fn positive(name: &str, x: f64) -> Result<f64, CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Usage(format!(
            "--{name} must be positive, got {x}"
        )))
    }
}

fn gen(a: GenArgs) -> Result<Report, CliError> {
    let usage = |e: pegscope_core::CurveError| CliError::Usage(e.to_string());
    if a.samples < 3 {
        return Err(CliError::Usage("--samples must be at least 3".into()));
    }
    let mut notes = Vec::new();
    let (curve, natural_base) = match a.shape {
        Shape::Circle => {
            let r = positive("radius", a.radius)?;
            (
                JordanCurve::circle(a.center, r, a.samples).map_err(usage)?,
                Some(a.center),
            )
        }
        Shape::Ellipse => {
            let ax = positive(
                "a",
                a.a.ok_or_else(|| CliError::Usage("ellipse needs --a".into()))?,
            )?;
            let bx = positive(
                "b",
                a.b.ok_or_else(|| CliError::Usage("ellipse needs --b".into()))?,
            )?;
            let e = JordanCurve::from_fn(a.samples, |s| {
                let (sn, cs) = s.sin_cos();
                a.center + Point::new(ax * cs, bx * sn)
            })
            .map_err(usage)?;
            (e, Some(a.center))
        }
        Shape::Polygon => {
            let v = parse_vertices(
                a.vertices
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("polygon needs --vertices".into()))?,
            )?;
            (JordanCurve::polygon(v).map_err(usage)?, None)
        }
        Shape::PerturbedCircle => {
            let r = positive("radius", a.radius)?;
            if !(a.amplitude >= 0.0 && a.amplitude < 1.0) {
                return Err(CliError::Usage("--amplitude must lie in [0, 1)".into()));
            }
            let (eps, k) = (a.amplitude, a.mode as f64);
            let c = JordanCurve::from_fn(a.samples, |s| {
                a.center + Point::unit(s) * (r * (1.0 + eps * (k * s).cos()))
            })
            .map_err(usage)?;
            (c, Some(a.center))
        }
        Shape::MollifiedSquare => {
            let h = 0.5 * positive("side", a.side)?;
            if a.index == 0 {
                return Err(CliError::Usage("--index must be positive".into()));
            }
            let c = a.center;
            let sq = JordanCurve::polygon(vec![
                c + Point::new(h, h),
                c + Point::new(-h, h),
                c + Point::new(-h, -h),
                c + Point::new(h, -h),
            ])
            .map_err(usage)?;
            let sq = normalize_area(&sq, c).map_err(|e| CliError::Failed(e.to_string()))?;
            let spec = MollifierSpec::for_curve(&sq, a.index);
            let m = mollify(&sq, &spec).map_err(|e| CliError::Failed(e.to_string()))?;
            (m, Some(c))
        }
    };
    let curve = if a.area_pi {
        let base = match a.base.or(natural_base) {
            Some(b) => b,
            None => pole_of_inaccessibility(&curve),
        };
        match normalize_area(&curve, base) {
            Ok(c) => c,
            Err(FlowError::FlowCollapse { .. }) => {
                notes.push("note: radial flow collapses onto the base point; rescaled by homothety instead".into());
                scale_to_area_pi(&curve, base).map_err(|e| CliError::Failed(e.to_string()))?
            }
            Err(FlowError::BaseOutside) => {
                return Err(CliError::Usage("base point is not inside the curve".into()));
            }
            Err(e) => return Err(CliError::Failed(e.to_string())),
        }
    } else {
        curve
    };
    Ok(Report {
        data: curve_to_json(&curve.to_data()).into_bytes(),
        out: a.out,
        notes,
        code: 0,
    })
}

fn find(a: FindArgs) -> Result<Report, CliError> {
    let curve = load(&a.input)?;
    let opts = a.finder.options()?;
    let f = closed_primitive(&curve);
    let res = find_with(&curve, f.as_ref(), a.theta, &opts, &[], &Rayon).map_err(finder_error)?;
    let mut report = Report::ok(tables::find_csv(&res), a.out);
    report.notes.extend(lift_note(&curve));
    if res.is_empty() {
        report.notes.push(FinderError::NoSolution.to_string());
        report.code = 1;
    }
    Ok(report)
}

fn sweep(a: SweepArgs) -> Result<Report, CliError> {
    let curve = load(&a.input)?;
    let opts = a.finder.options()?;
    let thetas: Vec<f64> = match (&a.grid, &a.thetas) {
        (Some(k), _) => (1..=*k)
            .map(|j| j as f64 * std::f64::consts::PI / (*k as f64 + 1.0))
            .collect(),
        (None, Some(list)) => list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(parse_angle)
            .collect::<Result<_, _>>()
            .map_err(CliError::Usage)?,
        (None, None) => return Err(CliError::Usage("sweep needs --grid or --thetas".into())),
    };
    let table = sweep_with(&curve, &thetas, &opts, &Rayon).map_err(finder_error)?;
    let mut report = Report::ok(tables::sweep_csv(&table), a.out);
    report.notes.extend(lift_note(&curve));
    Ok(report)
}

fn spectrum(a: SpectrumArgs) -> Result<Report, CliError> {
    if a.barcode {
        let b = circle_barcode(a.theta, a.window);
        let data = match a.versus {
            Some(t2) => format!(
                "bottleneck\n{}\n",
                fmt17(bottleneck(&b, &circle_barcode(t2, a.window)))
            )
            .into_bytes(),
            None => tables::barcode_csv(&b),
        };
        return Ok(Report::ok(data, a.out));
    }
    let input = a
        .input
        .ok_or_else(|| CliError::Usage("spectrum needs --in or --barcode".into()))?;
    let curve = load(&input)?;
    let opts = a.finder.options()?;
    let f = closed_primitive(&curve);
    let res = find_with(&curve, f.as_ref(), a.theta, &opts, &[], &Rayon).map_err(finder_error)?;
    let values: Vec<LiftValue> = spectrum_of(&res);
    let mut report = Report::ok(tables::spectrum_csv(a.theta, &values), a.out);
    report.notes.extend(lift_note(&curve));
    Ok(report)
}

fn classify(a: ClassifyArgs) -> Result<Report, CliError> {
    match classify_strip(a.t, a.theta) {
        Ok(r) => Ok(Report::ok(
            format!(
                "{},{},{},{}\n",
                r.shape_name(),
                r.n,
                r.hom_degrees.0,
                r.hom_degrees.1
            )
            .into_bytes(),
            None,
        )),
        Err(e @ (SpectrumError::InvalidTheta(_) | SpectrumError::NonFinite)) => {
            Err(CliError::Usage(e.to_string()))
        }
        Err(e) => Err(CliError::Failed(e.to_string())),
    }
}

fn bound(a: BoundArgs) -> Result<Report, CliError> {
    if a.curves.len() < 2 {
        return Err(CliError::Usage(
            "bound needs at least two --curve u=FILE levels".into(),
        ));
    }
    let mut levels = Vec::with_capacity(a.curves.len());
    for (u, path) in &a.curves {
        levels.push((*u, load(path)?));
    }
    levels.sort_by(|x, y| x.0.total_cmp(&y.0));
    let u0 = a.u0.unwrap_or(levels[0].0);
    let u1 = a.u1.unwrap_or(levels[levels.len() - 1].0);
    let base = a
        .base
        .unwrap_or_else(|| pole_of_inaccessibility(&levels[0].1));
    let family = AnnulusFamily::new(levels, base).map_err(|e| CliError::Failed(e.to_string()))?;
    let b = energy_bound(&family, u0, u1).map_err(|e| CliError::Failed(e.to_string()))?;
    let mut report = Report::ok(tables::bound_csv(&[b]), a.out);
    report
        .notes
        .push("note: the bound is valid for conformal level families".to_string());
    Ok(report)
}

fn plot(a: PlotArgs) -> Result<Report, CliError> {
    let curve = load(&a.input)?;
    let rects = match &a.rects {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            tables::read_rectangles(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?
        }
        None => Vec::new(),
    };
    Ok(Report::ok(svg::render(&curve, &rects).into_bytes(), a.out))
}

fn execute(cli: Cli) -> Result<Report, CliError> {
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::Find(a) => find(a),
        Command::Sweep(a) => sweep(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Classify(a) => classify(a),
        Command::Bound(a) => bound(a),
        Command::Plot(a) => plot(a),
    }
}

/// Parse `args`, run the command on a pool sized by `PEGSCOPE_THREADS`, write
/// results to `--out` or `stdout` and diagnostics to `stderr`; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return e.exit_code();
        }
    };
    match with_pool(threads_from_env(), || execute(cli)) {
        Ok(report) => {
            for n in &report.notes {
                let _ = writeln!(stderr, "{n}");
            }
            let written = match &report.out {
                Some(path) => fs::write(path, &report.data)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => stdout.write_all(&report.data).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => report.code,
                Err(m) => {
                    let _ = writeln!(stderr, "error: {m}");
                    1
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.code()
        }
    }
}
