use std::path::Path;
use std::str::FromStr;

use crate::hypergraph::ValidationPolicy;
use crate::{Error, Result};

/// Bins used when a numeric feature line gives none.
pub const DEFAULT_BINS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    Categorical,
    /// Normalized by the column maximum and cut into `bins` equal intervals.
    Numeric { bins: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingPolicy {
    /// Drop any feature column that has a missing value.
    #[default]
    DropFeature,
    /// Drop any row that has a missing feature value.
    DropRow,
}

/// How a CSV becomes a hypergraph.
///
/// The text form has one directive per line, `#` starting a comment:
///
/// ```text
/// buying categorical
/// area numeric 10
/// label class
/// missing drop_feature
/// classes good vgood
/// singletons keep
/// ```
///
/// `classes` keeps only rows with the listed labels and fixes class ids in
/// the listed order. `singletons keep` retains one-member hyperedges
/// instead of pruning them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSchema {
    pub features: Vec<FeatureSpec>,
    pub label_column: String,
    pub missing: MissingPolicy,
    pub classes: Option<Vec<String>>,
    pub singletons: ValidationPolicy,
}

impl DatasetSchema {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        text.parse()
    }
}

impl FromStr for DatasetSchema {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut features: Vec<FeatureSpec> = Vec::new();
        let mut label = None;
        let mut missing = MissingPolicy::default();
        let mut classes = None;
        let mut singletons = ValidationPolicy::Prune;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.as_slice() {
                ["label", name] => label = Some(name.to_string()),
                ["missing", "drop_feature"] => missing = MissingPolicy::DropFeature,
                ["missing", "drop_row"] => missing = MissingPolicy::DropRow,
                ["missing", other] => {
                    return Err(Error::parse(line_no, format!("unknown missing policy {other:?}")));
                }
                ["singletons", "keep"] => singletons = ValidationPolicy::KeepSingletons,
                ["singletons", "prune"] => singletons = ValidationPolicy::Prune,
                ["classes", rest @ ..] if !rest.is_empty() => {
                    classes = Some(rest.iter().map(|s| s.to_string()).collect());
                }
                [name, "categorical"] => features.push(FeatureSpec {
                    name: name.to_string(),
                    kind: FeatureKind::Categorical,
                }),
                [name, "numeric"] => features.push(FeatureSpec {
                    name: name.to_string(),
                    kind: FeatureKind::Numeric { bins: DEFAULT_BINS },
                }),
                [name, "numeric", bins] => {
                    let bins: usize = bins
                        .parse()
                        .map_err(|_| Error::parse(line_no, format!("bad bin count {bins:?}")))?;
                    if bins < 2 {
                        return Err(Error::parse(line_no, "numeric features need at least 2 bins"));
                    }
                    features.push(FeatureSpec {
                        name: name.to_string(),
                        kind: FeatureKind::Numeric { bins },
                    });
                }
                _ => return Err(Error::parse(line_no, format!("unrecognized schema line {line:?}"))),
            }
        }
        let label_column = label.ok_or_else(|| Error::parse(0, "schema has no label directive"))?;
        if features.iter().any(|f| f.name == label_column) {
            return Err(Error::parse(0, format!("label column {label_column:?} is also a feature")));
        }
        if features.is_empty() {
            return Err(Error::parse(0, "schema declares no features"));
        }
        Ok(DatasetSchema {
            features,
            label_column,
            missing,
            classes,
            singletons,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_directives() {
        let s: DatasetSchema = "# toy\ncolor categorical\nsize numeric 20\nwidth numeric\nlabel kind\nmissing drop_row\nclasses b a\nsingletons keep\n"
            .parse()
            .unwrap();
        assert_eq!(s.features.len(), 3);
        assert_eq!(s.features[1].kind, FeatureKind::Numeric { bins: 20 });
        assert_eq!(s.features[2].kind, FeatureKind::Numeric { bins: DEFAULT_BINS });
        assert_eq!(s.label_column, "kind");
        assert_eq!(s.missing, MissingPolicy::DropRow);
        assert_eq!(s.classes.as_deref(), Some(&["b".to_string(), "a".to_string()][..]));
        assert_eq!(s.singletons, ValidationPolicy::KeepSingletons);
    }

    #[test]
    fn rejects_bad_lines() {
        for bad in [
            "x numeric 1\nlabel y",
            "x categorical",
            "x categorical\nlabel x",
            "x weird\nlabel y",
            "x categorical\nlabel y\nmissing sometimes",
        ] {
            assert!(matches!(bad.parse::<DatasetSchema>(), Err(Error::Parse { .. })), "{bad}");
        }
    }

    #[test]
    fn shipped_schemas_parse() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../datasets/schemas");
        let mut count = 0;
        for entry in std::fs::read_dir(dir).unwrap() {
            DatasetSchema::from_path(entry.unwrap().path()).unwrap();
            count += 1;
        }
        assert_eq!(count, 9);
    }
}
