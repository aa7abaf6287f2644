//! Deterministic SVG 1.1 rendering of a curve and inscribed rectangles.

use std::fmt::Write;

use pegscope_core::{JordanCurve, Point};

const SIZE: f64 = 800.0;

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// One `path` for the curve and four `line` elements per rectangle, with the
/// rectangles sorted by their vertex coordinates.
pub fn render(curve: &JordanCurve, rects: &[[Point; 4]]) -> String {
    let (lo, hi) = curve.bounds();
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
    let margin = 0.05 * span;
    let scale = SIZE / (span + 2.0 * margin);
    let map = |p: Point| ((p.x - lo.x + margin) * scale, (hi.y - p.y + margin) * scale);
    let width = (hi.x - lo.x + 2.0 * margin) * scale;
    let height = (hi.y - lo.y + 2.0 * margin) * scale;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = num(width),
        h = num(height)
    );
    let mut d = String::new();
    for (i, &p) in curve.nodes().iter().enumerate() {
        let (x, y) = map(p);
        let _ = write!(
            d,
            "{}{} {} ",
            if i == 0 { "M" } else { "L" },
            num(x),
            num(y)
        );
    }
    d.push('Z');
    let _ = writeln!(
        out,
        "<path d=\"{d}\" fill=\"none\" stroke=\"#1f3b73\" stroke-width=\"1.5\"/>"
    );
    let mut sorted: Vec<[Point; 4]> = rects.to_vec();
    sorted.sort_by(|a, b| {
        a.iter()
            .flat_map(|p| [p.x, p.y])
            .zip(b.iter().flat_map(|p| [p.x, p.y]))
            .map(|(x, y)| x.total_cmp(&y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    for r in &sorted {
        for k in 0..4 {
            let (x1, y1) = map(r[k]);
            let (x2, y2) = map(r[(k + 1) % 4]);
            let _ = writeln!(
                out,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#c0392b\" stroke-width=\"1\"/>",
                num(x1),
                num(y1),
                num(x2),
                num(y2)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_counts() {
        let c = JordanCurve::circle(Point::ZERO, 1.0, 64).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let sq = [
            Point::new(h, h),
            Point::new(-h, h),
            Point::new(-h, -h),
            Point::new(h, -h),
        ];
        let svg = render(&c, &[sq]);
        assert_eq!(svg.matches("<path").count(), 1);
        assert_eq!(svg.matches("<line").count(), 4);
        let bare = render(&c, &[]);
        assert_eq!(bare.matches("<line").count(), 0);
        assert_eq!(render(&c, &[sq]), svg);
    }
}
