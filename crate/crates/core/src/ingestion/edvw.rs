//! The `.edvw` text format.
//!
//! ```text
//! # comment
//! 3 2
//! 2 0:3 1:1
//! 1 1:1 2:2
//! ```
//!
//! The first line gives the vertex and hyperedge counts; each following
//! line is `ω` then `vertex:γ` pairs. Reals are written in shortest
//! round-trip form, so reading a written file reproduces every bit.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::hypergraph::{build_hypergraph, EdvwHypergraph, Hyperedge, ValidationPolicy};
use crate::{Error, Result};

pub fn write_edvw<W: Write>(h: &EdvwHypergraph, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {}", h.n_vertices(), h.n_edges())?;
    for e in h.edges() {
        write!(out, "{}", e.weight())?;
        for &(v, g) in e.members() {
            write!(out, " {v}:{g}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_edvw_file(h: &EdvwHypergraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    write_edvw(h, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}

/// Parses a hypergraph; singleton edges are accepted (they may come from a
/// schema that keeps them), everything else is validated per line.
pub fn read_edvw<R: BufRead>(reader: R) -> Result<EdvwHypergraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::parse(line_no, e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let Some((n, m)) = header else {
            let mut count = |what: &str| {
                fields
                    .next()
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| Error::parse(line_no, format!("header needs {what}")))
            };
            let parsed = (count("a vertex count")?, count("a hyperedge count")?);
            if fields.next().is_some() {
                return Err(Error::parse(line_no, "header has extra fields"));
            }
            header = Some(parsed);
            continue;
        };
        if edges.len() == m {
            return Err(Error::parse(line_no, format!("more than the declared {m} hyperedges")));
        }
        let omega = parse_positive(fields.next().unwrap_or(""), line_no, "hyperedge weight")?;
        let mut members = Vec::new();
        for pair in fields {
            let (v, g) = pair
                .split_once(':')
                .ok_or_else(|| Error::parse(line_no, format!("expected vertex:weight, got {pair:?}")))?;
            let v: usize = v
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad vertex index {v:?}")))?;
            if v >= n {
                return Err(Error::parse(line_no, format!("vertex {v} out of range for {n} vertices")));
            }
            members.push((v, parse_positive(g, line_no, "vertex weight")?));
        }
        if members.is_empty() {
            return Err(Error::parse(line_no, "hyperedge has no members"));
        }
        edges.push(Hyperedge::new(omega, members));
    }
    let (n, m) = header.ok_or_else(|| Error::parse(0, "missing header line"))?;
    if edges.len() != m {
        return Err(Error::parse(0, format!("declared {m} hyperedges, found {}", edges.len())));
    }
    build_hypergraph(edges, n, ValidationPolicy::KeepSingletons)
}

pub fn read_edvw_file(path: impl AsRef<Path>) -> Result<EdvwHypergraph> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_edvw(std::io::BufReader::new(file))
}

fn parse_positive(s: &str, line: usize, what: &str) -> Result<f64> {
    let x: f64 = s
        .parse()
        .map_err(|_| Error::parse(line, format!("bad {what} {s:?}")))?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::parse(line, format!("{what} must be positive and finite, got {x}")));
    }
    Ok(x)
}

/// One decimal id per line.
pub fn write_labels<W: Write>(labels: &[usize], mut out: W) -> std::io::Result<()> {
    for l in labels {
        writeln!(out, "{l}")?;
    }
    Ok(())
}

pub fn read_labels<R: BufRead>(reader: R) -> Result<Vec<usize>> {
    let mut labels = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::parse(i + 1, e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        labels.push(
            line.parse()
                .map_err(|_| Error::parse(i + 1, format!("bad label {line:?}")))?,
        );
    }
    Ok(labels)
}
