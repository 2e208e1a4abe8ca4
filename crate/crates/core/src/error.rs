use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("hyperedge {edge}: non-positive weight {value}")]
    NonPositiveWeight { edge: usize, value: f64 },

    #[error("hyperedge {edge}: vertex {vertex} out of range for {n_vertices} vertices")]
    VertexIndexOutOfRange {
        edge: usize,
        vertex: usize,
        n_vertices: usize,
    },

    #[error("vertex {vertex} belongs to no hyperedge")]
    IsolatedVertex { vertex: usize },

    #[error("hyperedge {edge} has fewer than two members")]
    SingletonEdge { edge: usize },

    #[error("a hypergraph needs at least two vertices, got {0}")]
    TooFewVertices(usize),

    #[error("hypergraph is disconnected (component sizes {component_sizes:?})")]
    Disconnected { component_sizes: Vec<usize> },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("stationary probability of vertex {vertex} is degenerate ({value:e})")]
    DegenerateStationary { vertex: usize, value: f64 },

    #[error("second eigenvalue {lambda:e} is numerically zero; the spectrum signals a disconnected hypergraph")]
    DisconnectedSpectrum { lambda: f64 },

    #[error("Rayleigh quotient of the zero vector")]
    ZeroVector,

    #[error("partition must be a proper nonempty subset of the vertices")]
    TrivialPartition,

    #[error("cluster {0} is empty")]
    EmptyCluster(usize),

    #[error("cluster {0} cannot be bisected")]
    UnsplittableCluster(usize),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("k must be at least {min}, got {k}")]
    InvalidK { k: usize, min: usize },

    #[error("malformed CSV: {0}")]
    MalformedCsv(String),

    #[error("column {0:?} not found in CSV header")]
    UnknownColumn(String),

    #[error("row {row}, column {column:?}: cannot parse {value:?} as a number")]
    UnparseableNumeric {
        row: usize,
        column: String,
        value: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("brute force is capped at {max} vertices, got {n}")]
    TooLarge { n: usize, max: usize },

    #[error("no connected hypergraph generated after {retries} attempts")]
    GenerationFailed { retries: usize },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
