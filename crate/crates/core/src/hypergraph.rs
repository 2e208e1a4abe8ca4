//! EDVW hypergraph data model: validated construction, connectivity, and
//! the incidence matrices `R`, `W`, `D_V`, `D_E`.

use std::collections::VecDeque;

use crate::sparse::CsrMatrix;
use crate::{Error, Result};

/// A hyperedge with weight `ω(e)` and per-member vertex weights `γ_e(v)`.
///
/// Members are kept sorted by vertex index; non-members have no entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperedge {
    weight: f64,
    members: Vec<(usize, f64)>,
}

impl Hyperedge {
    /// Duplicate vertex entries are summed.
    pub fn new(weight: f64, members: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut members: Vec<(usize, f64)> = members.into_iter().collect();
        members.sort_by_key(|&(v, _)| v);
        members.dedup_by(|later, kept| {
            if later.0 == kept.0 {
                kept.1 += later.1;
                true
            } else {
                false
            }
        });
        Hyperedge { weight, members }
    }

    /// An edge with all-one vertex weights.
    pub fn unit(weight: f64, vertices: impl IntoIterator<Item = usize>) -> Self {
        Hyperedge::new(weight, vertices.into_iter().map(|v| (v, 1.0)))
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn members(&self) -> &[(usize, f64)] {
        &self.members
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().map(|&(v, _)| v)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn gamma(&self, v: usize) -> Option<f64> {
        self.members
            .binary_search_by_key(&v, |&(u, _)| u)
            .ok()
            .map(|i| self.members[i].1)
    }

    /// Hyperedge degree `δ(e) = Σ_{v∈e} γ_e(v)`.
    pub fn degree(&self) -> f64 {
        self.members.iter().map(|&(_, g)| g).sum()
    }

    pub(crate) fn members_mut(&mut self) -> &mut [(usize, f64)] {
        &mut self.members
    }
}

/// What to do with hyperedges that have fewer than two members.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValidationPolicy {
    /// Singleton and empty edges are errors.
    Strict,
    /// Singleton and empty edges are dropped.
    #[default]
    Prune,
    /// Empty edges are dropped, singletons kept. A singleton acts as a
    /// self-loop of the walk.
    KeepSingletons,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdvwHypergraph {
    n_vertices: usize,
    edges: Vec<Hyperedge>,
    vertex_names: Option<Vec<String>>,
}

/// Validates raw edges and assembles a hypergraph.
///
/// Connectivity is not required here; see [`check_connected`].
pub fn build_hypergraph(
    raw_edges: Vec<Hyperedge>,
    n_vertices: usize,
    policy: ValidationPolicy,
) -> Result<EdvwHypergraph> {
    if n_vertices < 2 {
        return Err(Error::TooFewVertices(n_vertices));
    }
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (i, edge) in raw_edges.into_iter().enumerate() {
        if !(edge.weight > 0.0 && edge.weight.is_finite()) {
            return Err(Error::NonPositiveWeight {
                edge: i,
                value: edge.weight,
            });
        }
        for &(v, g) in &edge.members {
            if v >= n_vertices {
                return Err(Error::VertexIndexOutOfRange {
                    edge: i,
                    vertex: v,
                    n_vertices,
                });
            }
            if !(g > 0.0 && g.is_finite()) {
                return Err(Error::NonPositiveWeight { edge: i, value: g });
            }
        }
        let keep = match (policy, edge.len()) {
            (_, n) if n >= 2 => true,
            (ValidationPolicy::Strict, _) => return Err(Error::SingletonEdge { edge: i }),
            (ValidationPolicy::KeepSingletons, 1) => true,
            _ => false,
        };
        if keep {
            edges.push(edge);
        }
    }
    let h = EdvwHypergraph {
        n_vertices,
        edges,
        vertex_names: None,
    };
    let degrees = h.vertex_degrees();
    if let Some(vertex) = degrees.iter().position(|&d| d <= 0.0) {
        return Err(Error::IsolatedVertex { vertex });
    }
    Ok(h)
}

/// True iff every pair of vertices is joined by a hyperpath.
pub fn check_connected(h: &EdvwHypergraph) -> bool {
    h.components().len() == 1
}

impl EdvwHypergraph {
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    /// Number of hyperedge-vertex connections, `m = Σ_e |e|`.
    pub fn n_connections(&self) -> usize {
        self.edges.iter().map(Hyperedge::len).sum()
    }

    pub fn vertex_names(&self) -> Option<&[String]> {
        self.vertex_names.as_deref()
    }

    pub fn with_vertex_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n_vertices {
            return Err(Error::LengthMismatch {
                expected: self.n_vertices,
                actual: names.len(),
            });
        }
        self.vertex_names = Some(names);
        Ok(self)
    }

    /// `d(v) = Σ_{e∋v} ω(e)`
    pub fn vertex_degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n_vertices];
        for e in &self.edges {
            for v in e.vertices() {
                d[v] += e.weight;
            }
        }
        d
    }

    /// `δ(e) = Σ_{v∈e} γ_e(v)`
    pub fn edge_degrees(&self) -> Vec<f64> {
        self.edges.iter().map(Hyperedge::degree).collect()
    }

    /// Connected components of the vertex-hyperedge incidence structure,
    /// each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); self.n_vertices];
        for (i, e) in self.edges.iter().enumerate() {
            for v in e.vertices() {
                incident[v].push(i);
            }
        }
        let mut seen_vertex = vec![false; self.n_vertices];
        let mut seen_edge = vec![false; self.edges.len()];
        let mut components = Vec::new();
        for start in 0..self.n_vertices {
            if seen_vertex[start] {
                continue;
            }
            seen_vertex[start] = true;
            let mut component = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &e in &incident[u] {
                    if std::mem::replace(&mut seen_edge[e], true) {
                        continue;
                    }
                    for v in self.edges[e].vertices() {
                        if !std::mem::replace(&mut seen_vertex[v], true) {
                            component.push(v);
                            queue.push_back(v);
                        }
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        check_connected(self)
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        let components = self.components();
        if components.len() == 1 {
            Ok(())
        } else {
            Err(Error::Disconnected {
                component_sizes: components.iter().map(Vec::len).collect(),
            })
        }
    }

    /// Sub-hypergraph induced by `vertices` (in the given order, which
    /// defines the local indexing). Each hyperedge is restricted to the
    /// selected vertices with `ω` and `γ` unchanged; restrictions with fewer
    /// than two members are dropped.
    pub fn induced(&self, vertices: &[usize]) -> Result<EdvwHypergraph> {
        let mut local = vec![usize::MAX; self.n_vertices];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .map(|e| {
                Hyperedge::new(
                    e.weight,
                    e.members
                        .iter()
                        .filter(|&&(v, _)| local[v] != usize::MAX)
                        .map(|&(v, g)| (local[v], g)),
                )
            })
            .collect();
        let mut h = build_hypergraph(edges, vertices.len(), ValidationPolicy::Prune)?;
        if let Some(names) = &self.vertex_names {
            h.vertex_names = Some(vertices.iter().map(|&v| names[v].clone()).collect());
        }
        Ok(h)
    }

    pub(crate) fn edges_mut(&mut self) -> &mut [Hyperedge] {
        &mut self.edges
    }
}

/// The matrices of the random-walk construction.
#[derive(Debug, Clone)]
pub struct IncidenceSystem {
    /// `|E|×|V|`, entries `γ_e(v)`.
    pub r: CsrMatrix,
    /// `|V|×|E|`, entries `ω(e)` where `v ∈ e`.
    pub w: CsrMatrix,
    /// `d(v)`
    pub d_v: Vec<f64>,
    /// `δ(e)`
    pub d_e: Vec<f64>,
}

pub fn incidence_matrices(h: &EdvwHypergraph) -> IncidenceSystem {
    let mut r_rows = Vec::with_capacity(h.n_edges());
    let mut w_trips = Vec::with_capacity(h.n_connections());
    for (i, e) in h.edges().iter().enumerate() {
        r_rows.push(e.members().to_vec());
        for v in e.vertices() {
            w_trips.push((v, i, e.weight()));
        }
    }
    let r = CsrMatrix::from_rows(h.n_vertices(), r_rows);
    let w = CsrMatrix::from_triplets(h.n_vertices(), h.n_edges(), &w_trips);
    IncidenceSystem {
        d_v: w.row_sums(),
        d_e: r.row_sums(),
        r,
        w,
    }
}
