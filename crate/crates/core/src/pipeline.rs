//! One clustering run end to end: method, k-way strategy, and the scores
//! every method is judged by (the hypergraph's own NCut and F1 against
//! known classes).

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::expansions::{CliquePlusPlus, StarPlusPlus, StarWeighting};
use crate::hypergraph::{incidence_matrices, EdvwHypergraph};
use crate::metrics::{greedy_f1_match, ncut2, ncut_k};
use crate::spectral::{hyperclus_g_on, kway, ClusterConfig, HyperClusG, KwayStrategy, Partition, SpectralModel};
use crate::walk::{default_max_iter, edvw_stationary_distribution, transition_matrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    HyperClusG,
    Star,
    Clique,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::HyperClusG, Method::Star, Method::Clique];

    pub fn name(self) -> &'static str {
        match self {
            Method::HyperClusG => "hyperclus-g",
            Method::Star => "star",
            Method::Clique => "clique",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method {s:?} (expected hyperclus-g, star or clique)"))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunOptions {
    pub method: Method,
    pub k: usize,
    pub strategy: KwayStrategy,
    pub cluster: ClusterConfig,
    pub star_weighting: StarWeighting,
}

impl RunOptions {
    pub fn new(method: Method, k: usize, strategy: KwayStrategy) -> Self {
        RunOptions {
            method,
            k,
            strategy,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub dataset: String,
    pub method: Method,
    pub k: usize,
    pub strategy: KwayStrategy,
    pub ncut: f64,
    /// Second eigenvalue of the bisection (k = 2 only). For the graph
    /// baselines this is the eigenvalue of the expanded graph.
    pub lambda2: Option<f64>,
    /// `|λ₂ − NCut| / NCut` (k = 2 only).
    pub relative_error: Option<f64>,
    /// Per-class F1 of the greedy matching, in class order.
    pub f1s: Option<Vec<f64>>,
    pub weighted_f1: Option<f64>,
    pub seconds: Option<f64>,
}

/// Field order of reports and bench rows.
pub const REPORT_KEYS: [&str; 10] = [
    "dataset",
    "method",
    "k",
    "strategy",
    "ncut",
    "lambda2",
    "relative_error",
    "f1s",
    "weighted_f1",
    "seconds",
];

impl RunReport {
    /// Values in [`REPORT_KEYS`] order; absent values are `NA`.
    pub fn values(&self) -> Vec<String> {
        let opt = |x: Option<f64>| x.map_or("NA".to_string(), |v| v.to_string());
        vec![
            self.dataset.clone(),
            self.method.name().to_string(),
            self.k.to_string(),
            self.strategy.name().to_string(),
            self.ncut.to_string(),
            opt(self.lambda2),
            opt(self.relative_error),
            self.f1s.as_ref().map_or("NA".to_string(), |f| {
                f.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
            }),
            opt(self.weighted_f1),
            opt(self.seconds),
        ]
    }

    /// `key<TAB>value` lines.
    pub fn to_key_values(&self) -> String {
        REPORT_KEYS
            .iter()
            .zip(self.values())
            .map(|(k, v)| format!("{k}\t{v}\n"))
            .collect()
    }

    pub fn to_row(&self) -> String {
        self.values().join("\t")
    }
}

/// Clusters `h` and scores the result. `truth`, when given, adds the F1
/// fields. The hypergraph objective is used for every method.
pub fn run(h: &EdvwHypergraph, dataset: &str, truth: Option<&[usize]>, opts: &RunOptions) -> Result<(Partition, RunReport)> {
    if let Some(t) = truth {
        if t.len() != h.n_vertices() {
            return Err(Error::LengthMismatch {
                expected: h.n_vertices(),
                actual: t.len(),
            });
        }
    }
    let started = Instant::now();
    let solver = opts.cluster.solver.clone();
    let part = match (opts.method, opts.k) {
        (Method::HyperClusG, 2) => {
            let model = SpectralModel::build(h, &opts.cluster)?;
            hyperclus_g_on(&model, &opts.cluster)?
        }
        (Method::HyperClusG, k) => kway(h, k, opts.strategy, &HyperClusG(opts.cluster.clone()))?,
        (Method::Star, k) => kway(
            h,
            k,
            opts.strategy,
            &StarPlusPlus {
                weighting: opts.star_weighting,
                solver,
            },
        )?,
        (Method::Clique, k) => kway(h, k, opts.strategy, &CliquePlusPlus { solver })?,
    };
    let elapsed = started.elapsed().as_secs_f64();

    let inc = incidence_matrices(h);
    let p = transition_matrix(&inc);
    let phi = edvw_stationary_distribution(
        &inc,
        &p,
        opts.cluster.stationary_tol,
        opts.cluster.stationary_max_iter.unwrap_or_else(|| default_max_iter(h.n_vertices())),
    )?;
    let (ncut, lambda2) = if part.k() == 2 {
        let s: Vec<usize> = (0..h.n_vertices()).filter(|&u| part.labels()[u] == 0).collect();
        (ncut2(&phi, &p, &s)?, part.lambda2)
    } else {
        (ncut_k(&phi, &p, part.labels())?, None)
    };
    let f1 = truth.map(|t| greedy_f1_match(part.labels(), t)).transpose()?;
    let report = RunReport {
        dataset: dataset.to_string(),
        method: opts.method,
        k: opts.k,
        strategy: opts.strategy,
        ncut,
        lambda2,
        relative_error: lambda2.map(|l| (l - ncut).abs() / ncut),
        f1s: f1.as_ref().map(|r| r.f1s()),
        weighted_f1: f1.map(|r| r.weighted_f1),
        seconds: Some(elapsed),
    };
    Ok((part, report))
}

/// NCut of a given labelling on `h`'s own walk.
pub fn labelling_ncut(h: &EdvwHypergraph, labels: &[usize]) -> Result<f64> {
    let inc = incidence_matrices(h);
    let p = transition_matrix(&inc);
    let phi = edvw_stationary_distribution(
        &inc,
        &p,
        crate::walk::DEFAULT_STATIONARY_TOL,
        default_max_iter(h.n_vertices()),
    )?;
    let k = labels.iter().max().map_or(0, |&m| m + 1);
    if k == 2 {
        let s: Vec<usize> = (0..labels.len()).filter(|&u| labels[u] == 0).collect();
        ncut2(&phi, &p, &s)
    } else {
        ncut_k(&phi, &p, labels)
    }
}
