//! Spectral clustering on hypergraphs with edge-dependent vertex weights.
//!
//! A hypergraph with edge weights `ω(e)` and per-edge vertex weights
//! `γ_e(v)` defines a random walk. Its stationary distribution and
//! Laplacian give a Rayleigh quotient whose minimizer relaxes the
//! normalized cut, and the signs of the second eigenvector bipartition
//! the vertices.
//!
//! ```
//! use hyperclus::hypergraph::{build_hypergraph, Hyperedge, ValidationPolicy};
//! use hyperclus::spectral::{hyperclus_g, ClusterConfig};
//!
//! let h = build_hypergraph(vec![Hyperedge::unit(1.0, [0, 1])], 2, ValidationPolicy::Strict)?;
//! let part = hyperclus_g(&h, &ClusterConfig::default())?;
//! assert_eq!(part.labels(), &[0, 1]);
//! # Ok::<(), hyperclus::Error>(())
//! ```

mod error;
pub mod expansions;
pub mod hypergraph;
pub mod ingestion;
pub mod laplacian;
pub mod metrics;
pub mod oracle;
pub mod pipeline;
pub mod sparse;
pub mod spectral;
pub mod walk;

pub use error::{Error, Result};

// The guide under book/ is compiled here so its snippets run as doctests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../README.md")]
    pub mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/hypergraphs.md")]
    pub mod hypergraphs {}
    #[doc = include_str!("../../../book/src/random-walk.md")]
    pub mod random_walk {}
    #[doc = include_str!("../../../book/src/laplacian.md")]
    pub mod laplacian {}
    #[doc = include_str!("../../../book/src/clustering.md")]
    pub mod clustering {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    pub mod metrics {}
    #[doc = include_str!("../../../book/src/expansions.md")]
    pub mod expansions {}
    #[doc = include_str!("../../../book/src/datasets.md")]
    pub mod datasets {}
    #[doc = include_str!("../../../book/src/verification.md")]
    pub mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
