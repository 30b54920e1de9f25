//! Static SVG line plots of curve series.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use tridyn::barycentric::CurveSeries;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 4] = ["#1f4e9a", "#b2401c", "#2a7a3b", "#6b3fa0"];

fn invalid(msg: String) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidInput, msg)
}

struct Frame {
    t0: f64,
    t1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn x(&self, t: f64) -> f64 {
        MARGIN + (t - self.t0) / (self.t1 - self.t0) * (WIDTH - 2.0 * MARGIN)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN - (v - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn frame(series: &[CurveSeries], diagonal: bool) -> io::Result<Frame> {
    let first = series
        .first()
        .ok_or_else(|| invalid("no series to plot".into()))?;
    let (t0, t1) = match (first.samples.first(), first.samples.last()) {
        (Some(a), Some(b)) => (a.0, b.0),
        _ => return Err(invalid(format!("{} has no samples", first.name.label()))),
    };
    if !(t1 > t0) {
        return Err(invalid(format!("empty t-range [{t0}, {t1}]")));
    }
    let (mut y0, mut y1) = if diagonal {
        (t0, t1)
    } else {
        (f64::INFINITY, f64::NEG_INFINITY)
    };
    for s in series {
        let same_range = s.samples.len() >= 2
            && (s.samples[0].0 - t0).abs() <= 1e-12
            && (s.samples[s.samples.len() - 1].0 - t1).abs() <= 1e-12;
        if !same_range {
            return Err(invalid(format!(
                "{} does not span [{t0}, {t1}]",
                s.name.label()
            )));
        }
        for &(_, v) in &s.samples {
            if !v.is_finite() {
                return Err(invalid(format!(
                    "{} has a non-finite value",
                    s.name.label()
                )));
            }
            y0 = y0.min(v);
            y1 = y1.max(v);
        }
    }
    if y1 <= y0 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    Ok(Frame { t0, t1, y0, y1 })
}

fn points<'a>(f: &Frame, pts: impl Iterator<Item = &'a (f64, f64)>) -> String {
    let mut s = String::new();
    for (i, &(t, v)) in pts.enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{:.2},{:.2}", f.x(t), f.y(v)).unwrap();
    }
    s
}

/// The plot as a string. Fails on an empty series list, an empty or
/// mismatched t-range, or non-finite values.
pub fn render_svg(series: &[CurveSeries], diagonal: bool) -> io::Result<String> {
    let f = frame(series, diagonal)?;
    let (left, right) = (MARGIN, WIDTH - MARGIN);
    let (top, bottom) = (MARGIN, HEIGHT - MARGIN);
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    )
    .unwrap();
    writeln!(
        s,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    )
    .unwrap();
    writeln!(
        s,
        "<g stroke=\"black\" stroke-width=\"1\"><line x1=\"{left}\" y1=\"{bottom}\" x2=\"{right}\" y2=\"{bottom}\"/><line x1=\"{left}\" y1=\"{bottom}\" x2=\"{left}\" y2=\"{top}\"/></g>"
    )
    .unwrap();
    s.push_str("<g font-family=\"sans-serif\" font-size=\"12\">\n");
    let label_y = bottom + 18.0;
    writeln!(
        s,
        "<text x=\"{left}\" y=\"{label_y}\" text-anchor=\"middle\">{:.4}</text>",
        f.t0
    )
    .unwrap();
    writeln!(
        s,
        "<text x=\"{right}\" y=\"{label_y}\" text-anchor=\"middle\">{:.4}</text>",
        f.t1
    )
    .unwrap();
    let label_x = left - 8.0;
    writeln!(
        s,
        "<text x=\"{label_x}\" y=\"{bottom}\" text-anchor=\"end\">{:.4}</text>",
        f.y0
    )
    .unwrap();
    writeln!(
        s,
        "<text x=\"{label_x}\" y=\"{}\" text-anchor=\"end\">{:.4}</text>",
        top + 4.0,
        f.y1
    )
    .unwrap();
    writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">t</text>",
        0.5 * WIDTH,
        bottom + 36.0
    )
    .unwrap();
    s.push_str("</g>\n");
    if diagonal {
        let ends = [(f.t0, f.t0), (f.t1, f.t1)];
        writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"#555555\" stroke-width=\"1\" stroke-dasharray=\"6 4\" points=\"{}\"/>",
            points(&f, ends.iter())
        )
        .unwrap();
    }
    for (i, c) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.5\" points=\"{}\"/>",
            points(&f, c.samples.iter())
        )
        .unwrap();
        writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{colour}\">{}</text>",
            left + 10.0,
            top + 16.0 * (i as f64 + 1.0),
            c.name.label()
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Renders first and only then creates the file, so a rejected input
/// leaves nothing on disk.
pub fn emit_svg(series: &[CurveSeries], diagonal: bool, path: &Path) -> io::Result<()> {
    let svg = render_svg(series, diagonal)?;
    fs::write(path, svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tridyn::barycentric::{sample_curve, CurveName};

    #[test]
    fn deterministic_and_well_formed() {
        let gg = sample_curve(CurveName::Gg, 0.0, 2.0, 50).unwrap();
        let a = render_svg(std::slice::from_ref(&gg), true).unwrap();
        let b = render_svg(&[gg], true).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("width=\"800\" height=\"600\""));
        assert!(a.contains("stroke-dasharray"));
        assert_eq!(a.matches("<polyline").count(), 2);
        assert!(a.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn rejects_empty_and_mismatched_ranges() {
        assert!(render_svg(&[], false).is_err());
        let flat = CurveSeries {
            name: CurveName::Gg,
            samples: vec![(1.0, 0.5), (1.0, 0.5)],
        };
        assert!(render_svg(&[flat], false).is_err());
        let u = sample_curve(CurveName::UFirst, 0.1, 1.5, 10).unwrap();
        let w = sample_curve(CurveName::WFirst, 0.2, 1.5, 10).unwrap();
        assert!(render_svg(&[u, w], true).is_err());
    }
}
