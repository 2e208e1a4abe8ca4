use std::collections::BTreeMap;
use std::io::BufRead;
use std::path::Path;

use super::schema::DatasetSchema;
use super::table::{ColumnData, LabeledTable};
use crate::hypergraph::{build_hypergraph, EdvwHypergraph, Hyperedge};
use crate::{Error, Result};

/// Slack used when a normalized value lands on a bin boundary, so that
/// `0.3 · 10` still falls in bin 3 despite rounding.
const BIN_EDGE_SLACK: f64 = 1e-9;

/// One unit hyperedge per category value and per nonempty numeric bin,
/// features in schema order, values in sorted order, bins ascending.
/// Singleton edges follow `schema.singletons`.
pub fn featurize(table: &LabeledTable, schema: &DatasetSchema) -> Result<EdvwHypergraph> {
    let mut edges = Vec::new();
    for column in &table.columns {
        match &column.data {
            ColumnData::Categorical(values) => {
                let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
                for (row, v) in values.iter().enumerate() {
                    groups.entry(v.as_str()).or_default().push(row);
                }
                edges.extend(groups.into_values().map(|rows| Hyperedge::unit(1.0, rows)));
            }
            ColumnData::Numeric { values, bins } => {
                let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                for (row, &x) in values.iter().enumerate() {
                    if x < 0.0 {
                        log::warn!("{}: negative value {x} in row {row} clamped to the first bin", column.name);
                    }
                    groups.entry(bin_of(x, max, *bins)).or_default().push(row);
                }
                edges.extend(groups.into_values().map(|rows| Hyperedge::unit(1.0, rows)));
            }
        }
    }
    build_hypergraph(edges, table.n_rows(), schema.singletons)
}

/// 1-based bin of `x / max` among `[0, 1/b], (1/b, 2/b], …, ((b−1)/b, 1]`.
fn bin_of(x: f64, max: f64, bins: usize) -> usize {
    if !(max > 0.0) {
        return 1;
    }
    let t = x / max * bins as f64;
    ((t - BIN_EDGE_SLACK).ceil().max(1.0) as usize).min(bins)
}

/// Replaces each `γ_e(v)` by the number of members of `e` that share
/// `v`'s class.
pub fn assign_edvw(h: &EdvwHypergraph, labels: &[usize]) -> Result<EdvwHypergraph> {
    if labels.len() != h.n_vertices() {
        return Err(Error::LengthMismatch {
            expected: h.n_vertices(),
            actual: labels.len(),
        });
    }
    let mut out = h.clone();
    for edge in out.edges_mut() {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &(v, _) in edge.members() {
            *counts.entry(labels[v]).or_default() += 1;
        }
        for (v, gamma) in edge.members_mut() {
            *gamma = counts[&labels[*v]] as f64;
        }
    }
    Ok(out)
}

/// All vertex weights set to 1 (edge-independent weights).
pub fn unit_edvw(h: &EdvwHypergraph) -> EdvwHypergraph {
    let mut out = h.clone();
    for edge in out.edges_mut() {
        for (_, gamma) in edge.members_mut() {
            *gamma = 1.0;
        }
    }
    out
}

/// Overrides vertex weights from lines `edge_index vertex gamma`
/// (`#` comments allowed). Every named pair must already be a membership.
pub fn apply_gamma_file(h: &EdvwHypergraph, path: impl AsRef<Path>) -> Result<EdvwHypergraph> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    apply_gamma_reader(h, std::io::BufReader::new(file))
}

pub fn apply_gamma_reader<R: BufRead>(h: &EdvwHypergraph, reader: R) -> Result<EdvwHypergraph> {
    let mut out = h.clone();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::parse(line_no, e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [e, v, g] = fields.as_slice() else {
            return Err(Error::parse(line_no, "expected `edge vertex gamma`"));
        };
        let e: usize = e.parse().map_err(|_| Error::parse(line_no, format!("bad edge index {e:?}")))?;
        let v: usize = v.parse().map_err(|_| Error::parse(line_no, format!("bad vertex {v:?}")))?;
        let g: f64 = g.parse().map_err(|_| Error::parse(line_no, format!("bad weight {g:?}")))?;
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::parse(line_no, format!("vertex weight must be positive, got {g}")));
        }
        let edge = out
            .edges_mut()
            .get_mut(e)
            .ok_or_else(|| Error::parse(line_no, format!("no hyperedge {e}")))?;
        let slot = edge
            .members_mut()
            .iter_mut()
            .find(|(u, _)| *u == v)
            .ok_or_else(|| Error::parse(line_no, format!("vertex {v} is not a member of hyperedge {e}")))?;
        slot.1 = g;
    }
    Ok(out)
}
