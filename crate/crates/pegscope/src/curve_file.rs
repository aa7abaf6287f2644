//! Curve JSON: `{"kind":"polygon","vertices":[[x,y],...]}` or
//! `{"kind":"samples","period":6.283185307179586,"points":[[s,x,y],...]}`.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use pegscope_core::{validate, CurveData, CurveError, JordanCurve, Point, ValidityReport};
use serde::Deserialize;

use crate::format::fmt17;

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawCurve {
    Polygon { vertices: Vec<[f64; 2]> },
    Samples { period: f64, points: Vec<[f64; 3]> },
}

#[derive(Debug)]
pub enum CurveFileError {
    Io(io::Error),
    Json(serde_json::Error),
    Period(f64),
    Curve(CurveError),
}

impl fmt::Display for CurveFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveFileError::Io(e) => write!(f, "cannot read curve file: {e}"),
            CurveFileError::Json(e) => write!(f, "malformed curve JSON: {e}"),
            CurveFileError::Period(p) => write!(f, "sample period must be 2*pi, got {p}"),
            CurveFileError::Curve(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CurveFileError {}

impl From<CurveError> for CurveFileError {
    fn from(e: CurveError) -> Self {
        CurveFileError::Curve(e)
    }
}

/// Parse the JSON text without validating the curve.
pub fn parse_curve(text: &str) -> Result<CurveData, CurveFileError> {
    let raw: RawCurve = serde_json::from_str(text).map_err(CurveFileError::Json)?;
    Ok(match raw {
        RawCurve::Polygon { vertices } => CurveData::Polygon(
            vertices
                .into_iter()
                .map(|[x, y]| Point::new(x, y))
                .collect(),
        ),
        RawCurve::Samples { period, points } => {
            if (period - std::f64::consts::TAU).abs() > 1e-12 {
                return Err(CurveFileError::Period(period));
            }
            CurveData::Samples(
                points
                    .into_iter()
                    .map(|[s, x, y]| (s, Point::new(x, y)))
                    .collect(),
            )
        }
    })
}

/// Serialize with 17 significant digits.
pub fn curve_to_json(data: &CurveData) -> String {
    let mut out = String::new();
    match data {
        CurveData::Polygon(v) => {
            out.push_str("{\"kind\":\"polygon\",\"vertices\":[");
            for (i, p) in v.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&format!("[{},{}]", fmt17(p.x), fmt17(p.y)));
            }
        }
        CurveData::Samples(v) => {
            out.push_str("{\"kind\":\"samples\",\"period\":");
            out.push_str(&fmt17(std::f64::consts::TAU));
            out.push_str(",\"points\":[");
            for (i, (s, p)) in v.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&format!("[{},{},{}]", fmt17(*s), fmt17(p.x), fmt17(p.y)));
            }
        }
    }
    out.push_str("]}\n");
    out
}

pub fn read_curve(path: &Path) -> Result<(JordanCurve, ValidityReport), CurveFileError> {
    let text = fs::read_to_string(path).map_err(CurveFileError::Io)?;
    let data = parse_curve(&text)?;
    Ok(validate(data)?)
}

pub fn write_curve(path: &Path, curve: &JordanCurve) -> io::Result<()> {
    fs::write(path, curve_to_json(&curve.to_data()))
}
