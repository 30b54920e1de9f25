//! Plain-text tables for orbits and curves.
//!
//! Numbers are written as `{:.16e}`, i.e. 17 significant digits, which is
//! enough for every `f64` to parse back to the identical value.

use thiserror::Error;
use tridyn::barycentric::{CurveName, CurveSeries};

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn malformed(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        msg: msg.into(),
    }
}

/// An orbit as a table: `columns` excludes the leading `iter` column.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitTable {
    pub columns: Vec<String>,
    pub rows: Vec<(usize, Vec<f64>)>,
}

pub fn number(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn emit_orbit(table: &OrbitTable) -> String {
    let mut s = String::from("iter");
    for c in &table.columns {
        s.push(',');
        s.push_str(c);
    }
    s.push('\n');
    for (iter, values) in &table.rows {
        s.push_str(&iter.to_string());
        for v in values {
            s.push(',');
            s.push_str(&number(*v));
        }
        s.push('\n');
    }
    s
}

fn parse_values(line_no: usize, fields: &[&str], expected: usize) -> Result<Vec<f64>, ParseError> {
    if fields.len() != expected {
        return Err(malformed(
            line_no,
            format!("expected {expected} values, found {}", fields.len()),
        ));
    }
    fields
        .iter()
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|e| malformed(line_no, format!("{f:?}: {e}")))
        })
        .collect()
}

pub fn parse_orbit(text: &str) -> Result<OrbitTable, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| malformed(1, "empty input"))?;
    let mut names = header.split(',').map(str::trim);
    if names.next() != Some("iter") {
        return Err(malformed(1, "header must start with `iter`"));
    }
    let columns: Vec<String> = names.map(String::from).collect();
    let mut rows = Vec::new();
    for (no, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        let iter = fields[0]
            .trim()
            .parse::<usize>()
            .map_err(|e| malformed(no, format!("iteration index: {e}")))?;
        rows.push((iter, parse_values(no, &fields[1..], columns.len())?));
    }
    Ok(OrbitTable { columns, rows })
}

/// One block per series: `# NAME`, then `t,value`, then the samples.
pub fn emit_curves(series: &[CurveSeries]) -> String {
    let mut s = String::new();
    for c in series {
        s.push_str("# ");
        s.push_str(c.name.label());
        s.push_str("\nt,value\n");
        for (t, v) in &c.samples {
            s.push_str(&number(*t));
            s.push(',');
            s.push_str(&number(*v));
            s.push('\n');
        }
    }
    s
}

pub fn parse_curves(text: &str) -> Result<Vec<CurveSeries>, ParseError> {
    let mut out: Vec<CurveSeries> = Vec::new();
    let mut expect_header = false;
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(label) = line.strip_prefix('#') {
            let label = label.trim();
            let name = CurveName::from_label(label)
                .ok_or_else(|| malformed(no, format!("unknown curve {label:?}")))?;
            out.push(CurveSeries {
                name,
                samples: Vec::new(),
            });
            expect_header = true;
        } else if expect_header {
            if line != "t,value" {
                return Err(malformed(no, "expected `t,value`"));
            }
            expect_header = false;
        } else {
            let current = out
                .last_mut()
                .ok_or_else(|| malformed(no, "sample before any `# name` line"))?;
            let fields: Vec<&str> = line.split(',').collect();
            let v = parse_values(no, &fields, 2)?;
            current.samples.push((v[0], v[1]));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_round_trip_is_exact() {
        let table = OrbitTable {
            columns: vec!["a".into(), "b".into(), "c".into()],
            rows: vec![
                (0, vec![1.0, 2.3, std::f64::consts::TAU - 3.3]),
                (1, vec![0.1 + 0.2, 1e-300, 5e-324]),
                (2, vec![-0.0, 3.0, f64::MAX]),
            ],
        };
        let back = parse_orbit(&emit_orbit(&table)).unwrap();
        assert_eq!(back.columns, table.columns);
        for ((i, a), (j, b)) in back.rows.iter().zip(&table.rows) {
            assert_eq!(i, j);
            for (x, y) in a.iter().zip(b) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn curve_round_trip_is_exact() {
        let series = vec![
            CurveSeries {
                name: CurveName::Gg,
                samples: vec![(0.0, 0.0), (1.0 / 3.0, 0.123_456_789_012_345_67)],
            },
            CurveSeries {
                name: CurveName::UFirst,
                samples: vec![(0.7, std::f64::consts::FRAC_PI_2)],
            },
        ];
        assert_eq!(parse_curves(&emit_curves(&series)).unwrap(), series);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_orbit("").is_err());
        assert!(parse_orbit("step,a\n0,1\n").is_err());
        assert_eq!(parse_orbit("iter,a,b\n0,1.0\n").unwrap_err().line, 2);
        assert!(parse_curves("1.0,2.0\n").is_err());
        assert!(parse_curves("# GG\nx,y\n").is_err());
        assert!(parse_curves("# nope\n").is_err());
    }
}
