//! Labeled tables to hypergraphs: CSV loading, feature hyperedges, vertex
//! weights from class counts, and the `.edvw` file format.
//!
//! Every categorical value and every nonempty numeric bin becomes one
//! hyperedge of weight 1 over the rows that have it.

mod edvw;
mod featurize;
mod schema;
mod table;

use std::path::Path;

pub use edvw::{read_edvw, read_edvw_file, read_labels, write_edvw, write_edvw_file, write_labels};
pub use featurize::{apply_gamma_file, apply_gamma_reader, assign_edvw, featurize, unit_edvw};
pub use schema::{DatasetSchema, FeatureKind, FeatureSpec, MissingPolicy, DEFAULT_BINS};
pub use table::{load_csv, load_csv_reader, ColumnData, FeatureColumn, LabeledTable};

use crate::hypergraph::EdvwHypergraph;
use crate::Result;

/// Hypergraph with class-count vertex weights, plus the class ids it was
/// built from.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub hypergraph: EdvwHypergraph,
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
}

/// `load_csv`, `featurize` and `assign_edvw` in one step.
pub fn load_dataset(csv: impl AsRef<Path>, schema: &DatasetSchema) -> Result<Dataset> {
    let table = load_csv(csv, schema)?;
    let unit = featurize(&table, schema)?;
    Ok(Dataset {
        hypergraph: assign_edvw(&unit, &table.labels)?,
        labels: table.labels,
        class_names: table.class_names,
    })
}
