//! CSV tables for finder, sweep, spectrum, barcode and bound output.

use std::io;

use pegscope_core::annulus::EnergyBound;
use pegscope_core::finder::{FinderResult, SweepTable};
use pegscope_core::spectrum::Barcode;
use pegscope_core::symplectic::LiftValue;
use pegscope_core::Point;

use crate::format::fmt17;

pub const FIND_HEADER: [&str; 17] = [
    "kind", "theta", "s1", "s2", "residual", "action", "members", "s1_min", "s1_max", "v0x", "v0y",
    "v1x", "v1y", "v2x", "v2y", "v3x", "v3y",
];
pub const SWEEP_HEADER: [&str; 4] = ["theta", "count", "min_action", "max_residual"];
pub const SPECTRUM_HEADER: [&str; 2] = ["theta", "action"];
pub const BARCODE_HEADER: [&str; 3] = ["degree", "birth", "death"];
pub const BOUND_HEADER: [&str; 5] = ["u0", "u1", "L", "area_gap", "bound"];

fn opt(x: Option<f64>) -> String {
    x.map(fmt17).unwrap_or_else(|| "nan".to_string())
}

fn table<const K: usize>(
    header: [&str; K],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn find_csv(result: &FinderResult) -> Vec<u8> {
    table(
        FIND_HEADER,
        result.solutions.iter().map(|s| {
            let p = &s.point;
            let (kind, members, range) = match s.family {
                Some(f) => ("family", f.members, f.s1_range),
                None => ("rectangle", 1, (p.s1, p.s1)),
            };
            let mut row = vec![
                kind.to_string(),
                fmt17(result.theta),
                fmt17(p.s1),
                fmt17(p.s2),
                fmt17(p.residual),
                opt(p.action.map(LiftValue::value)),
                members.to_string(),
                fmt17(range.0),
                fmt17(range.1),
            ];
            for v in s.rectangle.vertices {
                row.push(fmt17(v.x));
                row.push(fmt17(v.y));
            }
            row
        }),
    )
}

pub fn sweep_csv(table_: &SweepTable) -> Vec<u8> {
    table(
        SWEEP_HEADER,
        table_.rows.iter().map(|r| {
            vec![
                fmt17(r.theta),
                r.count.to_string(),
                opt(r.min_action),
                opt(r.max_residual),
            ]
        }),
    )
}

pub fn spectrum_csv(theta: f64, values: &[LiftValue]) -> Vec<u8> {
    table(
        SPECTRUM_HEADER,
        values.iter().map(|v| vec![fmt17(theta), fmt17(v.value())]),
    )
}

pub fn barcode_csv(barcode: &Barcode) -> Vec<u8> {
    table(
        BARCODE_HEADER,
        barcode
            .bars()
            .iter()
            .map(|b| vec![b.degree.to_string(), fmt17(b.birth), fmt17(b.death)]),
    )
}

pub fn bound_csv(rows: &[EnergyBound]) -> Vec<u8> {
    table(
        BOUND_HEADER,
        rows.iter().map(|b| {
            vec![
                fmt17(b.u0),
                fmt17(b.u1),
                fmt17(b.l),
                fmt17(b.area_gap),
                fmt17(b.bound),
            ]
        }),
    )
}

/// Rectangle vertices from a finder CSV.
pub fn read_rectangles(text: &str) -> io::Result<Vec<[Point; 4]>> {
    let bad = |m: String| io::Error::new(io::ErrorKind::InvalidData, m);
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| bad(format!("missing column {name}")))
    };
    let cols: Vec<usize> = ["v0x", "v0y", "v1x", "v1y", "v2x", "v2y", "v3x", "v3y"]
        .iter()
        .map(|n| col(n))
        .collect::<io::Result<_>>()?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let mut v = [0.0; 8];
        for (k, &c) in cols.iter().enumerate() {
            let field = rec.get(c).ok_or_else(|| bad("short row".to_string()))?;
            v[k] = field
                .parse()
                .map_err(|_| bad(format!("not a number: {field}")))?;
        }
        out.push([
            Point::new(v[0], v[1]),
            Point::new(v[2], v[3]),
            Point::new(v[4], v[5]),
            Point::new(v[6], v[7]),
        ]);
    }
    Ok(out)
}
