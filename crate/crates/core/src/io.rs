//! Plain-text file formats.
//!
//! **Points** (`.csv`): one point per line, comma-separated coordinates. A
//! first line reading `# weighted` makes the last column a weight.
//!
//! ```text
//! # weighted
//! 0,0,2.5
//! 1,0.5,-1
//! ```
//!
//! **Polylines** (`.poly`): a `POLYLINE <d>` header, then one vertex per line
//! in traversal order.
//!
//! **Meshes** (`.off`): the OFF format restricted to triangles: `OFF`, a
//! `nv nf ne` counts line, `nv` vertex lines and `nf` lines of the form
//! `3 i j k`.
//!
//! Blank lines and `#` comment lines are skipped everywhere. Serializers write
//! the shortest decimal that parses back to the same `f64`, so
//! `parse(serialize(x)) == x` bit for bit.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::shapes::{DiscreteMeasure, PolyCurve, TriMesh};

const WEIGHTED_HEADER: &str = "# weighted";

fn as_text(bytes: &[u8]) -> Result<&str> {
    std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        Error::parse(line, "invalid UTF-8")
    })
}

/// Non-blank, non-comment lines with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_f64(token: &str, line: usize) -> Result<f64> {
    let t = token.trim();
    let v: f64 = t
        .parse()
        .map_err(|_| Error::parse(line, format!("not a number: {t:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite value: {t:?}")));
    }
    Ok(v)
}

fn parse_csv_row(l: &str, line: usize) -> Result<Vec<f64>> {
    l.split(',').map(|t| parse_f64(t, line)).collect()
}

pub fn parse_points(bytes: &[u8]) -> Result<DiscreteMeasure> {
    let text = as_text(bytes)?;
    let weighted = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .is_some_and(|l| l.trim() == WEIGHTED_HEADER);

    let mut width = None;
    let mut coords = Vec::new();
    let mut weights = Vec::new();
    for (line, l) in content_lines(text) {
        let mut row = parse_csv_row(l, line)?;
        let w = *width.get_or_insert(row.len());
        if row.len() != w {
            return Err(Error::parse(line, format!("expected {w} columns, found {}", row.len())));
        }
        if weighted {
            if w < 2 {
                return Err(Error::parse(line, "weighted rows need coordinates and a weight"));
            }
            weights.push(row.pop().expect("non-empty row"));
        } else {
            weights.push(1.0);
        }
        coords.extend(row);
    }
    let Some(w) = width else {
        return Err(Error::parse(text.lines().count().max(1), "no points"));
    };
    let dim = if weighted { w - 1 } else { w };
    DiscreteMeasure::from_flat(dim, coords, weights).map_err(|e| Error::parse(1, e.to_string()))
}

pub fn serialize_points(m: &DiscreteMeasure) -> String {
    let mut out = String::new();
    let weighted = !m.is_unweighted();
    if weighted {
        out.push_str(WEIGHTED_HEADER);
        out.push('\n');
    }
    for (p, w) in m.points().zip(m.weights()) {
        write_row(&mut out, p, ",");
        if weighted {
            let _ = write!(out, ",{w}");
        }
        out.push('\n');
    }
    out
}

fn write_row(out: &mut String, values: &[f64], sep: &str) {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        let _ = write!(out, "{v}");
    }
}

pub fn parse_curve(bytes: &[u8]) -> Result<PolyCurve> {
    let text = as_text(bytes)?;
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing POLYLINE header"))?;
    let dim = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["POLYLINE", d] => d
            .parse::<usize>()
            .map_err(|_| Error::parse(hline, format!("bad dimension {d:?}")))?,
        _ => {
            return Err(Error::parse(
                hline,
                format!("expected `POLYLINE <d>`, found {header:?}"),
            ))
        }
    };
    if dim < 2 {
        return Err(Error::parse(
            hline,
            format!("polyline dimension must be at least 2, got {dim}"),
        ));
    }
    let mut coords: Vec<f64> = Vec::new();
    let mut last_line = hline;
    for (line, l) in lines {
        let row = parse_csv_row(l, line)?;
        if row.len() != dim {
            return Err(Error::parse(
                line,
                format!("expected {dim} coordinates, found {}", row.len()),
            ));
        }
        if coords.len() >= dim && coords[coords.len() - dim..] == row[..] {
            return Err(Error::parse(line, "repeated consecutive vertex (zero-length segment)"));
        }
        coords.extend(row);
        last_line = line;
    }
    if coords.len() < 2 * dim {
        return Err(Error::parse(
            last_line,
            format!("a polyline needs at least 2 vertices, got {}", coords.len() / dim),
        ));
    }
    PolyCurve::from_flat(dim, coords).map_err(|e| Error::parse(last_line, e.to_string()))
}

pub fn serialize_curve(c: &PolyCurve) -> String {
    let mut out = format!("POLYLINE {}\n", c.dim());
    for v in c.vertices() {
        write_row(&mut out, v, ",");
        out.push('\n');
    }
    out
}

fn parse_usize(token: &str, line: usize) -> Result<usize> {
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("not a non-negative integer: {token:?}")))
}

pub fn parse_mesh(bytes: &[u8]) -> Result<TriMesh> {
    let text = as_text(bytes)?;
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing OFF header"))?;
    if header != "OFF" {
        return Err(Error::parse(hline, format!("expected `OFF`, found {header:?}")));
    }
    let (cline, counts) = lines
        .next()
        .ok_or_else(|| Error::parse(hline + 1, "missing counts line"))?;
    let counts: Vec<&str> = counts.split_whitespace().collect();
    if counts.len() != 3 {
        return Err(Error::parse(cline, "expected `nv nf ne`"));
    }
    let nv = parse_usize(counts[0], cline)?;
    let nf = parse_usize(counts[1], cline)?;
    parse_usize(counts[2], cline)?;

    let mut vertices = Vec::with_capacity(nv);
    let mut last_line = cline;
    for _ in 0..nv {
        let (line, l) = lines
            .next()
            .ok_or_else(|| Error::parse(last_line + 1, format!("expected {nv} vertices")))?;
        let xyz: Vec<f64> = l
            .split_whitespace()
            .map(|t| parse_f64(t, line))
            .collect::<Result<_>>()?;
        if xyz.len() != 3 {
            return Err(Error::parse(
                line,
                format!("expected 3 coordinates, found {}", xyz.len()),
            ));
        }
        vertices.push([xyz[0], xyz[1], xyz[2]]);
        last_line = line;
    }

    let mut triangles = Vec::with_capacity(nf);
    let mut face_lines = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (line, l) = lines
            .next()
            .ok_or_else(|| Error::parse(last_line + 1, format!("expected {nf} faces")))?;
        let idx: Vec<usize> = l
            .split_whitespace()
            .map(|t| parse_usize(t, line))
            .collect::<Result<_>>()?;
        if idx.first() != Some(&3) {
            return Err(Error::parse(line, "only triangle faces (`3 i j k`) are supported"));
        }
        if idx.len() != 4 {
            return Err(Error::parse(
                line,
                format!("face lists {} indices, expected 3", idx.len() - 1),
            ));
        }
        if let Some(&bad) = idx[1..].iter().find(|&&i| i >= nv) {
            return Err(Error::parse(
                line,
                format!("vertex index {bad} out of range (nv = {nv})"),
            ));
        }
        triangles.push([idx[1], idx[2], idx[3]]);
        face_lines.push(line);
        last_line = line;
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::parse(line, "unexpected content after faces"));
    }
    TriMesh::new(vertices, triangles).map_err(|e| {
        let line = match &e {
            Error::Geometry(msg) => msg
                .strip_prefix("triangle ")
                .and_then(|s| s.split_whitespace().next())
                .and_then(|s| s.parse::<usize>().ok())
                .map_or(last_line, |f| face_lines[f]),
            _ => last_line,
        };
        Error::parse(line, e.to_string())
    })
}

pub fn serialize_mesh(m: &TriMesh) -> String {
    let mut out = format!("OFF\n{} {} 0\n", m.vertices().len(), m.triangles().len());
    for v in m.vertices() {
        write_row(&mut out, v, " ");
        out.push('\n');
    }
    for [a, b, c] in m.triangles() {
        let _ = writeln!(out, "3 {a} {b} {c}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_of(e: Error) -> usize {
        match e {
            Error::Parse { line, .. } => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unweighted_points() {
        let m = parse_points(b"0,0\n1,1\n").unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.len(), 2);
        assert_eq!(m.weights(), &[1.0, 1.0]);
    }

    #[test]
    fn weighted_points() {
        let m = parse_points(b"# weighted\n0,0,2.5\n").unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.point(0), &[0.0, 0.0]);
        assert_eq!(m.weights(), &[2.5]);
    }

    #[test]
    fn point_errors_carry_line_numbers() {
        assert_eq!(line_of(parse_points(b"0,0\n1\n").unwrap_err()), 2);
        assert_eq!(line_of(parse_points(b"0,0\n1,x\n").unwrap_err()), 2);
        assert!(matches!(parse_points(b"").unwrap_err(), Error::Parse { .. }));
        assert!(matches!(
            parse_points(b"# weighted\n1\n").unwrap_err(),
            Error::Parse { line: 2, .. }
        ));
        assert!(parse_points(&[0xff, 0xfe]).is_err());
    }

    #[test]
    fn curve_formats() {
        let c = parse_curve(b"POLYLINE 2\n0,0\n1,0\n").unwrap();
        assert_eq!(c.num_vertices(), 2);
        assert_eq!(c.vertex(1), &[1.0, 0.0]);
        assert!(parse_curve(b"POLYLINE 2\n0,0\n").is_err());
        assert_eq!(line_of(parse_curve(b"POLYLINE 3\n0,0,0\n0,0,0\n").unwrap_err()), 3);
        assert_eq!(line_of(parse_curve(b"POLY 2\n0,0\n1,0\n").unwrap_err()), 1);
        assert_eq!(line_of(parse_curve(b"POLYLINE 2\n0,0\n1,0,0\n").unwrap_err()), 3);
    }

    const TRIANGLE: &str = "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n";

    #[test]
    fn single_triangle_off() {
        let m = parse_mesh(TRIANGLE.as_bytes()).unwrap();
        assert_eq!(m.vertices().len(), 3);
        assert_eq!(m.triangles(), &[[0, 1, 2]]);
    }

    #[test]
    fn mesh_errors() {
        let quad = "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n";
        assert_eq!(line_of(parse_mesh(quad.as_bytes()).unwrap_err()), 7);
        let oob = "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 99\n";
        assert_eq!(line_of(parse_mesh(oob.as_bytes()).unwrap_err()), 6);
        let degenerate = "OFF\n3 1 0\n0 0 0\n1 0 0\n2 0 0\n3 0 1 2\n";
        assert_eq!(line_of(parse_mesh(degenerate.as_bytes()).unwrap_err()), 6);
        assert_eq!(line_of(parse_mesh(b"PLY\n").unwrap_err()), 1);
        assert!(parse_mesh(b"OFF\n3 1 0\n0 0 0\n").is_err());
    }

    #[test]
    fn serializers_emit_expected_text() {
        let m = parse_points(b"# weighted\n0,0,2.5\n").unwrap();
        assert_eq!(serialize_points(&m), "# weighted\n0,0,2.5\n");
        let c = parse_curve(b"POLYLINE 2\n0,0\n1,0\n").unwrap();
        assert_eq!(serialize_curve(&c), "POLYLINE 2\n0,0\n1,0\n");
        let t = parse_mesh(TRIANGLE.as_bytes()).unwrap();
        assert_eq!(serialize_mesh(&t), TRIANGLE);
    }
}
