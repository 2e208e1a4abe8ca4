//! Graph expansions of a hypergraph and pairwise spectral bisection, used as
//! baselines.
//!
//! The random-walk Laplacian `L_rw = D⁻¹(D − A)` is similar to
//! `I − D^{-1/2} A D^{-1/2}` via `x = D^{-1/2} y`. The symmetric form goes
//! through the same deflated eigensolver as the hypergraph, with null
//! vector `√d`, and the positive rescaling leaves signs untouched.

use std::io::Write;

use crate::hypergraph::EdvwHypergraph;
use crate::laplacian::SymLaplacian;
use crate::sparse::CsrMatrix;
use crate::spectral::{bipartition, second_eigenpair, sign_labels, Bisector, Partition, SolverConfig};
use crate::{Error, Result};

/// Undirected weighted graph. For a star expansion the first
/// `n_original` vertices are the hypergraph's vertices and the rest stand
/// for its hyperedges.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    adjacency: CsrMatrix,
    n_original: usize,
    pair_contributions: usize,
}

impl WeightedGraph {
    /// Builds a graph from undirected weighted edges; parallel edges add up
    /// and self-loops are dropped.
    pub fn from_edges(n_vertices: usize, edges: &[(usize, usize, f64)]) -> Self {
        let mut trips = Vec::with_capacity(2 * edges.len());
        for &(u, v, w) in edges {
            if u != v {
                trips.push((u, v, w));
                trips.push((v, u, w));
            }
        }
        WeightedGraph {
            adjacency: CsrMatrix::from_triplets(n_vertices, n_vertices, &trips),
            n_original: n_vertices,
            pair_contributions: edges.len(),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.adjacency.n_rows()
    }

    pub fn adjacency(&self) -> &CsrMatrix {
        &self.adjacency
    }

    /// Vertices `0..n_original` come from the hypergraph.
    pub fn n_original(&self) -> usize {
        self.n_original
    }

    pub fn is_original(&self, v: usize) -> bool {
        v < self.n_original
    }

    /// Distinct undirected edges.
    pub fn n_edges(&self) -> usize {
        self.adjacency.nnz() / 2
    }

    /// Edges added before parallel ones were merged. For a clique expansion
    /// this is `Σ_e |e|(|e|−1)/2`.
    pub fn pair_contributions(&self) -> usize {
        self.pair_contributions
    }

    pub fn degrees(&self) -> Vec<f64> {
        self.adjacency.row_sums()
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.adjacency.get(u, v)
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Connected component sizes, in order of lowest vertex.
    pub fn components(&self) -> Vec<usize> {
        let n = self.n_vertices();
        let mut seen = vec![false; n];
        let mut sizes = Vec::new();
        for start in 0..n {
            if std::mem::replace(&mut seen[start], true) {
                continue;
            }
            let mut stack = vec![start];
            let mut size = 0;
            while let Some(u) = stack.pop() {
                size += 1;
                for &v in self.adjacency.row(u).0 {
                    if !std::mem::replace(&mut seen[v], true) {
                        stack.push(v);
                    }
                }
            }
            sizes.push(size);
        }
        sizes
    }

    /// Whitespace edge list, one `u v weight` line per undirected edge with
    /// `u < v`.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for u in 0..self.n_vertices() {
            for (v, w) in self.adjacency.row_iter(u) {
                if u < v {
                    writeln!(out, "{u} {v} {w}")?;
                }
            }
        }
        Ok(())
    }
}

/// CLIQUE++: every pair inside a hyperedge gets an edge of weight `ω(e)`,
/// summed over shared hyperedges. Vertex weights are ignored.
pub fn clique_expansion(h: &EdvwHypergraph) -> WeightedGraph {
    let mut edges = Vec::new();
    for e in h.edges() {
        let members: Vec<usize> = e.vertices().collect();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                edges.push((u, v, e.weight()));
            }
        }
    }
    WeightedGraph::from_edges(h.n_vertices(), &edges)
}

/// Weight of the star edge between a vertex and its hyperedge's vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StarWeighting {
    /// `ω(e)`. With unit vertex weights this bisects the same way as
    /// HyperClus-G.
    #[default]
    EdgeWeight,
    /// `ω(e)/|e|`.
    SizeNormalized,
}

/// STAR++: one extra vertex `n + i` per hyperedge `i`, joined to each member.
pub fn star_expansion(h: &EdvwHypergraph, weighting: StarWeighting) -> WeightedGraph {
    let n = h.n_vertices();
    let mut edges = Vec::with_capacity(h.n_connections());
    for (i, e) in h.edges().iter().enumerate() {
        let w = match weighting {
            StarWeighting::EdgeWeight => e.weight(),
            StarWeighting::SizeNormalized => e.weight() / e.len() as f64,
        };
        for u in e.vertices() {
            edges.push((u, n + i, w));
        }
    }
    let mut g = WeightedGraph::from_edges(n + h.n_edges(), &edges);
    g.n_original = n;
    g
}

/// Second eigenpair of `L_rw` solved in symmetric form; returns the
/// eigenvalue and `y = D^{1/2} x`, which has the signs of `x`.
pub fn graph_second_eigenpair(g: &WeightedGraph, solver: &SolverConfig) -> Result<(f64, Vec<f64>)> {
    let components = g.components();
    if components.len() > 1 {
        return Err(Error::Disconnected {
            component_sizes: components,
        });
    }
    let d = g.degrees();
    let total: f64 = d.iter().sum();
    let inv_sqrt: Vec<f64> = d.iter().map(|x| 1.0 / x.sqrt()).collect();
    let n = g.n_vertices();
    let rows = (0..n)
        .map(|u| {
            let mut row: Vec<(usize, f64)> = g
                .adjacency
                .row_iter(u)
                .map(|(v, a)| (v, -a * inv_sqrt[u] * inv_sqrt[v]))
                .collect();
            let pos = row.partition_point(|&(v, _)| v < u);
            row.insert(pos, (u, 1.0));
            row
        })
        .collect();
    let null = d.iter().map(|x| (x / total).sqrt()).collect();
    let lsym = SymLaplacian::from_parts(CsrMatrix::from_rows(n, rows), null);
    let pair = second_eigenpair(&lsym, solver)?;
    Ok((pair.value, pair.vector))
}

/// Sign bisection of a graph. With `restrict_to_originals` only the
/// original vertices are labelled, and orientation looks at them alone.
pub fn graph_spectral_2way(g: &WeightedGraph, restrict_to_originals: bool, solver: &SolverConfig) -> Result<Partition> {
    let (lambda, y) = graph_second_eigenpair(g, solver)?;
    let kept = if restrict_to_originals { g.n_original } else { g.n_vertices() };
    bipartition(sign_labels(&y[..kept]), lambda)
}

/// STAR++ bisection of a hypergraph.
#[derive(Debug, Clone, Default)]
pub struct StarPlusPlus {
    pub weighting: StarWeighting,
    pub solver: SolverConfig,
}

impl Bisector for StarPlusPlus {
    fn bisect(&self, h: &EdvwHypergraph) -> Result<Partition> {
        graph_spectral_2way(&star_expansion(h, self.weighting), true, &self.solver)
    }
}

/// CLIQUE++ bisection of a hypergraph.
#[derive(Debug, Clone, Default)]
pub struct CliquePlusPlus {
    pub solver: SolverConfig,
}

impl Bisector for CliquePlusPlus {
    fn bisect(&self, h: &EdvwHypergraph) -> Result<Partition> {
        graph_spectral_2way(&clique_expansion(h), false, &self.solver)
    }
}
