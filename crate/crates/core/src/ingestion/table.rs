use std::collections::BTreeSet;
use std::io::Read;
use std::path::Path;

use super::schema::{DatasetSchema, FeatureKind, MissingPolicy};
use crate::{Error, Result};

/// Cells read as missing.
const MISSING_MARKERS: [&str; 3] = ["", "?", "NA"];

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Categorical(Vec<String>),
    Numeric { values: Vec<f64>, bins: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureColumn {
    pub name: String,
    pub data: ColumnData,
}

/// Feature columns plus a class id per row.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTable {
    pub columns: Vec<FeatureColumn>,
    pub labels: Vec<usize>,
    /// `class_names[id]` is the label string of class `id`.
    pub class_names: Vec<String>,
}

impl LabeledTable {
    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }
}

pub fn load_csv(path: impl AsRef<Path>, schema: &DatasetSchema) -> Result<LabeledTable> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    load_csv_reader(file, schema)
}

/// Reads a headed CSV. Rows whose label is outside `schema.classes` are
/// skipped; missing feature values are handled per `schema.missing`.
pub fn load_csv_reader<R: Read>(reader: R, schema: &DatasetSchema) -> Result<LabeledTable> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr.headers().map_err(csv_error)?.clone();
    let index_of = |name: &str| {
        header
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    };
    let label_idx = index_of(&schema.label_column)?;
    let feature_idx = schema
        .features
        .iter()
        .map(|f| index_of(&f.name))
        .collect::<Result<Vec<_>>>()?;

    // (CSV line, label, cells)
    let mut rows: Vec<(u64, String, Vec<String>)> = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let label = record[label_idx].trim().to_string();
        if let Some(classes) = &schema.classes {
            if !classes.contains(&label) {
                continue;
            }
        } else if is_missing(&label) {
            log::warn!("line {line}: missing label, row skipped");
            continue;
        }
        let cells = feature_idx.iter().map(|&j| record[j].trim().to_string()).collect();
        rows.push((line, label, cells));
    }

    let mut keep_feature = vec![true; schema.features.len()];
    match schema.missing {
        MissingPolicy::DropFeature => {
            for (j, keep) in keep_feature.iter_mut().enumerate() {
                if rows.iter().any(|r| is_missing(&r.2[j])) {
                    log::info!("feature {:?} has missing values and is dropped", schema.features[j].name);
                    *keep = false;
                }
            }
        }
        MissingPolicy::DropRow => {
            let before = rows.len();
            rows.retain(|r| !r.2.iter().any(|c| is_missing(c)));
            if rows.len() < before {
                log::info!("{} rows with missing values dropped", before - rows.len());
            }
        }
    }

    let class_names: Vec<String> = match &schema.classes {
        Some(classes) => classes.clone(),
        None => rows
            .iter()
            .map(|r| r.1.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect(),
    };
    let labels = rows
        .iter()
        .map(|r| class_names.iter().position(|c| *c == r.1).expect("label collected above"))
        .collect();

    let mut columns = Vec::new();
    for (j, spec) in schema.features.iter().enumerate() {
        if !keep_feature[j] {
            continue;
        }
        let data = match spec.kind {
            FeatureKind::Categorical => ColumnData::Categorical(rows.iter().map(|r| r.2[j].clone()).collect()),
            FeatureKind::Numeric { bins } => {
                let values = rows
                    .iter()
                    .map(|(line, _, cells)| {
                        cells[j].parse::<f64>().map_err(|_| Error::UnparseableNumeric {
                            row: *line as usize,
                            column: spec.name.clone(),
                            value: cells[j].clone(),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                ColumnData::Numeric { values, bins }
            }
        };
        columns.push(FeatureColumn {
            name: spec.name.clone(),
            data,
        });
    }
    Ok(LabeledTable {
        columns,
        labels,
        class_names,
    })
}

fn is_missing(cell: &str) -> bool {
    MISSING_MARKERS.contains(&cell)
}

fn csv_error(e: csv::Error) -> Error {
    Error::MalformedCsv(e.to_string())
}
