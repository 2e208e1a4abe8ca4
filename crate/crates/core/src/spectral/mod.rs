//! HyperClus-G bipartitioning and its k-way extensions.
//!
//! A bipartition is read off the signs of the second eigenvector of
//! `L_sym`, rescaled by `Π^{-1/2}`. Since `Π^{-1/2}` is a positive diagonal
//! it never changes a sign, so thresholding `z` directly is equivalent.
//! The vector is oriented so its first nonzero entry is positive, which
//! makes the output independent of the eigensolver's sign choice.

mod eigen;

use crate::hypergraph::EdvwHypergraph;
use crate::laplacian::{laplacian, sym_laplacian, HypergraphLaplacian, SymLaplacian};
use crate::metrics::ncut_k;
use crate::walk::{
    default_max_iter, edvw_stationary_distribution, transition_matrix, StationaryDistribution, TransitionMatrix,
    DEFAULT_STATIONARY_TOL,
};
use crate::hypergraph::incidence_matrices;
use crate::{Error, Result};

pub use eigen::{second_eigenpair, EigenPair, SolverConfig, ZERO_EIGENVALUE_TOL};

/// Entries with magnitude at or below this are skipped when orienting.
pub const ORIENTATION_EPS: f64 = 1e-10;

/// Cluster assignment with ids `0..k`, every cluster nonempty.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
    /// `λ₂` of the bipartition that produced this partition (2-way only).
    pub lambda2: Option<f64>,
}

impl Partition {
    pub fn from_labels(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().max().map_or(0, |&m| m + 1);
        let mut seen = vec![false; k];
        for &c in &labels {
            seen[c] = true;
        }
        if let Some(empty) = seen.iter().position(|&s| !s) {
            return Err(Error::EmptyCluster(empty));
        }
        Ok(Partition {
            labels,
            k,
            lambda2: None,
        })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<usize> {
        self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Members of each cluster, ascending.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &c) in self.labels.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.labels {
            sizes[c] += 1;
        }
        sizes
    }
}

/// Parameters shared by every spectral computation.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterConfig {
    pub solver: SolverConfig,
    pub stationary_tol: f64,
    /// `None` means `100·|V| + 1000`.
    pub stationary_max_iter: Option<usize>,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig {
            solver: SolverConfig::default(),
            stationary_tol: DEFAULT_STATIONARY_TOL,
            stationary_max_iter: None,
        }
    }
}

/// Walk, stationary distribution and Laplacians of one hypergraph.
#[derive(Debug, Clone)]
pub struct SpectralModel {
    pub p: TransitionMatrix,
    pub phi: StationaryDistribution,
    pub laplacian: HypergraphLaplacian,
    pub sym: SymLaplacian,
}

impl SpectralModel {
    pub fn build(h: &EdvwHypergraph, config: &ClusterConfig) -> Result<Self> {
        h.require_connected()?;
        let inc = incidence_matrices(h);
        let p = transition_matrix(&inc);
        let max_iter = config
            .stationary_max_iter
            .unwrap_or_else(|| default_max_iter(h.n_vertices()));
        let phi = edvw_stationary_distribution(&inc, &p, config.stationary_tol, max_iter)?;
        let laplacian = laplacian(&p, &phi);
        let sym = sym_laplacian(&laplacian, &phi)?;
        Ok(SpectralModel {
            p,
            phi,
            laplacian,
            sym,
        })
    }

    pub fn second_eigenpair(&self, solver: &SolverConfig) -> Result<EigenPair> {
        second_eigenpair(&self.sym, solver)
    }
}

/// Flips `z` so that its first entry with `|z(u)| > ORIENTATION_EPS` is
/// positive.
pub fn orient(z: &mut [f64]) {
    if let Some(&first) = z.iter().find(|x| x.abs() > ORIENTATION_EPS) {
        if first < 0.0 {
            for x in z.iter_mut() {
                *x = -*x;
            }
        }
    }
}

/// Cluster 0 is `{u : z(u) ≥ 0}`, cluster 1 the rest. `z` is oriented
/// first.
pub fn sign_labels(z: &[f64]) -> Vec<usize> {
    let mut z = z.to_vec();
    orient(&mut z);
    z.iter().map(|&x| usize::from(x < 0.0)).collect()
}

/// Turns sign labels into a 2-way partition, rejecting a one-sided split.
pub(crate) fn bipartition(labels: Vec<usize>, lambda2: f64) -> Result<Partition> {
    if labels.iter().all(|&c| c == labels[0]) {
        return Err(Error::TrivialPartition);
    }
    Ok(Partition {
        labels,
        k: 2,
        lambda2: Some(lambda2),
    })
}

/// HyperClus-G: bipartition by the signs of the second eigenvector of
/// `L_sym`.
pub fn hyperclus_g(h: &EdvwHypergraph, config: &ClusterConfig) -> Result<Partition> {
    let model = SpectralModel::build(h, config)?;
    hyperclus_g_on(&model, config)
}

/// HyperClus-G on an already assembled model.
pub fn hyperclus_g_on(model: &SpectralModel, config: &ClusterConfig) -> Result<Partition> {
    let pair = model.second_eigenpair(&config.solver)?;
    bipartition(sign_labels(&pair.vector), pair.value)
}

/// Anything that can bipartition a connected hypergraph. The k-way
/// strategies are generic over this so the expansion baselines can recurse
/// the same way.
pub trait Bisector: Sync {
    fn bisect(&self, h: &EdvwHypergraph) -> Result<Partition>;
}

/// HyperClus-G as a [`Bisector`].
#[derive(Debug, Clone, Default)]
pub struct HyperClusG(pub ClusterConfig);

impl Bisector for HyperClusG {
    fn bisect(&self, h: &EdvwHypergraph) -> Result<Partition> {
        hyperclus_g(h, &self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KwayStrategy {
    /// Always bisect the cluster with the most vertices.
    Largest,
    /// Bisect every cluster tentatively and keep the split with the
    /// smallest k-way NCut.
    #[default]
    Best,
}

impl KwayStrategy {
    pub fn name(self) -> &'static str {
        match self {
            KwayStrategy::Largest => "largest",
            KwayStrategy::Best => "best",
        }
    }
}

impl std::str::FromStr for KwayStrategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "largest" => Ok(KwayStrategy::Largest),
            "best" => Ok(KwayStrategy::Best),
            other => Err(format!("unknown k-way strategy {other:?} (expected largest or best)")),
        }
    }
}

/// k clusters by repeated bisection. `k = 2` is a single bisection.
pub fn kway<B: Bisector>(h: &EdvwHypergraph, k: usize, strategy: KwayStrategy, bisector: &B) -> Result<Partition> {
    match strategy {
        KwayStrategy::Largest => kway_recursive_largest_with(h, k, bisector),
        KwayStrategy::Best => kway_best_split_with(h, k, bisector),
    }
}

pub fn kway_recursive_largest(h: &EdvwHypergraph, k: usize, config: &ClusterConfig) -> Result<Partition> {
    kway_recursive_largest_with(h, k, &HyperClusG(config.clone()))
}

pub fn kway_best_split(h: &EdvwHypergraph, k: usize, config: &ClusterConfig) -> Result<Partition> {
    kway_best_split_with(h, k, &HyperClusG(config.clone()))
}

pub fn kway_recursive_largest_with<B: Bisector>(h: &EdvwHypergraph, k: usize, bisector: &B) -> Result<Partition> {
    let first = start_kway(h, k, bisector)?;
    if k == 2 {
        return Ok(first);
    }
    let mut labels = first.into_labels();
    for l in 2..k {
        let sizes = cluster_sizes(&labels, l);
        // max_by_key keeps the last maximum; scan in reverse for the lowest id
        let target = (0..l).rev().max_by_key(|&c| sizes[c]).expect("l ≥ 2");
        let members = members_of(&labels, target);
        let moved = split_cluster(h, target, &members, bisector)?;
        for v in moved {
            labels[v] = l;
        }
    }
    Partition::from_labels(labels)
}

pub fn kway_best_split_with<B: Bisector>(h: &EdvwHypergraph, k: usize, bisector: &B) -> Result<Partition> {
    let first = start_kway(h, k, bisector)?;
    if k == 2 {
        return Ok(first);
    }
    // φ and P of the whole hypergraph score every candidate
    let model = ScoringWalk::build(h)?;
    let mut labels = first.into_labels();
    for l in 2..k {
        let candidates: Vec<Result<Vec<usize>>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..l)
                .map(|c| {
                    let members = members_of(&labels, c);
                    scope.spawn(move || split_cluster(h, c, &members, bisector))
                })
                .collect();
            handles
                .into_iter()
                .map(|t| t.join().expect("bisection thread panicked"))
                .collect()
        });
        let mut best: Option<(f64, usize, Vec<usize>)> = None;
        let mut first_error = None;
        for (c, candidate) in candidates.into_iter().enumerate() {
            let moved = match candidate {
                Ok(moved) => moved,
                Err(Error::UnsplittableCluster(_)) => continue,
                Err(e) => {
                    first_error.get_or_insert(e);
                    continue;
                }
            };
            let mut trial = labels.clone();
            for &v in &moved {
                trial[v] = l;
            }
            let score = ncut_k(&model.phi, &model.p, &trial)?;
            log::debug!("stage {l}: splitting cluster {c} gives NCut {score}");
            // strict comparison keeps the lowest cluster id among ties
            if best.as_ref().is_none_or(|b| score < b.0) {
                best = Some((score, c, moved));
            }
        }
        let Some((_, _, moved)) = best else {
            return Err(first_error.unwrap_or(Error::UnsplittableCluster(0)));
        };
        for v in moved {
            labels[v] = l;
        }
    }
    Partition::from_labels(labels)
}

struct ScoringWalk {
    p: TransitionMatrix,
    phi: StationaryDistribution,
}

impl ScoringWalk {
    fn build(h: &EdvwHypergraph) -> Result<Self> {
        let inc = incidence_matrices(h);
        let p = transition_matrix(&inc);
        let phi = edvw_stationary_distribution(&inc, &p, DEFAULT_STATIONARY_TOL, default_max_iter(h.n_vertices()))?;
        Ok(ScoringWalk { p, phi })
    }
}

fn start_kway<B: Bisector>(h: &EdvwHypergraph, k: usize, bisector: &B) -> Result<Partition> {
    if k < 2 {
        return Err(Error::InvalidK { k, min: 2 });
    }
    h.require_connected()?;
    bisector.bisect(h)
}

/// Bisects cluster `id` (global vertex ids `members`, ascending) and
/// returns the vertices that move to the new cluster.
///
/// When the restriction of the hypergraph to the cluster is disconnected,
/// the largest component stays and the other components move; no
/// eigenproblem is needed for that split.
fn split_cluster<B: Bisector>(h: &EdvwHypergraph, id: usize, members: &[usize], bisector: &B) -> Result<Vec<usize>> {
    if members.len() < 2 {
        return Err(Error::UnsplittableCluster(id));
    }
    let components = restricted_components(h, members);
    if components.len() > 1 {
        // ties go to the component with the lowest vertex, which comes first
        let keep = (0..components.len())
            .rev()
            .max_by_key(|&i| components[i].len())
            .expect("nonempty");
        let mut moved: Vec<usize> = components
            .into_iter()
            .enumerate()
            .filter(|&(i, _)| i != keep)
            .flat_map(|(_, c)| c)
            .collect();
        moved.sort_unstable();
        return Ok(moved);
    }
    let sub = h.induced(members)?;
    let split = bisector.bisect(&sub)?;
    Ok(split
        .labels()
        .iter()
        .zip(members)
        .filter(|(&c, _)| c == 1)
        .map(|(_, &v)| v)
        .collect())
}

/// Connected components of `members` under the hyperedges restricted to
/// them, ordered by lowest vertex. Vertices left without any restricted
/// edge of two or more members are components of their own.
pub(crate) fn restricted_components(h: &EdvwHypergraph, members: &[usize]) -> Vec<Vec<usize>> {
    let mut local = vec![usize::MAX; h.n_vertices()];
    for (i, &v) in members.iter().enumerate() {
        local[v] = i;
    }
    let mut parent: Vec<usize> = (0..members.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in h.edges() {
        let mut root = None;
        for v in e.vertices() {
            if local[v] == usize::MAX {
                continue;
            }
            let r = find(&mut parent, local[v]);
            match root {
                None => root = Some(r),
                Some(r0) if r0 != r => {
                    let (lo, hi) = (r0.min(r), r0.max(r));
                    parent[hi] = lo;
                    root = Some(lo);
                }
                _ => {}
            }
        }
    }
    let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); members.len()];
    for i in 0..members.len() {
        let r = find(&mut parent, i);
        by_root[r].push(members[i]);
    }
    let mut components: Vec<Vec<usize>> = by_root.into_iter().filter(|c| !c.is_empty()).collect();
    for c in &mut components {
        c.sort_unstable();
    }
    components.sort_by_key(|c| c[0]);
    components
}

fn cluster_sizes(labels: &[usize], k: usize) -> Vec<usize> {
    let mut sizes = vec![0; k];
    for &c in labels {
        sizes[c] += 1;
    }
    sizes
}

fn members_of(labels: &[usize], c: usize) -> Vec<usize> {
    labels
        .iter()
        .enumerate()
        .filter(|&(_, &l)| l == c)
        .map(|(v, _)| v)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{build_hypergraph, Hyperedge, ValidationPolicy};
    use crate::metrics::ncut2;

    fn two_vertex() -> EdvwHypergraph {
        build_hypergraph(vec![Hyperedge::unit(1.0, [0, 1])], 2, ValidationPolicy::Strict).unwrap()
    }

    /// `blocks` cliques of `size` vertices, chained by weak pairwise edges.
    fn planted(blocks: usize, size: usize, bridge: f64) -> EdvwHypergraph {
        let mut edges = Vec::new();
        for b in 0..blocks {
            let base = b * size;
            edges.push(Hyperedge::new(1.0, (0..size).map(|i| (base + i, 1.0 + i as f64))));
            edges.push(Hyperedge::unit(1.0, (0..size - 1).map(|i| base + i)));
            if b + 1 < blocks {
                edges.push(Hyperedge::unit(bridge, [base + size - 1, base + size]));
            }
        }
        build_hypergraph(edges, blocks * size, ValidationPolicy::Strict).unwrap()
    }

    #[test]
    fn two_vertex_split() {
        let h = two_vertex();
        let part = hyperclus_g(&h, &ClusterConfig::default()).unwrap();
        assert_eq!(part.labels(), &[0, 1]);
        assert!((part.lambda2.unwrap() - 1.0).abs() < 1e-12);
        let model = SpectralModel::build(&h, &ClusterConfig::default()).unwrap();
        assert_eq!(ncut2(&model.phi, &model.p, &[0]).unwrap(), 1.0);
        let pair = model.second_eigenpair(&SolverConfig::default()).unwrap();
        let s = 0.5f64.sqrt();
        assert!((pair.vector[0].abs() - s).abs() < 1e-12 && (pair.vector[0] + pair.vector[1]).abs() < 1e-12);
    }

    #[test]
    fn orientation_is_deterministic() {
        assert_eq!(sign_labels(&[-0.5, 0.2, 0.3]), vec![0, 1, 1]);
        assert_eq!(sign_labels(&[0.5, -0.2, -0.3]), vec![0, 1, 1]);
        // tiny leading entries are skipped; exact zeros join cluster 0
        assert_eq!(sign_labels(&[1e-12, -0.4, 0.0, 0.3]), vec![1, 0, 0, 1]);
    }

    #[test]
    fn partition_validation() {
        assert!(matches!(Partition::from_labels(vec![0, 2]), Err(Error::EmptyCluster(1))));
        let p = Partition::from_labels(vec![1, 0, 1]).unwrap();
        assert_eq!(p.k(), 2);
        assert_eq!(p.clusters(), vec![vec![1], vec![0, 2]]);
        assert_eq!(p.cluster_sizes(), vec![1, 2]);
    }

    #[test]
    fn disconnected_input_is_rejected() {
        let h = build_hypergraph(
            vec![Hyperedge::unit(1.0, [0, 1]), Hyperedge::unit(1.0, [2, 3])],
            4,
            ValidationPolicy::Strict,
        )
        .unwrap();
        assert!(matches!(
            hyperclus_g(&h, &ClusterConfig::default()),
            Err(Error::Disconnected { .. })
        ));
    }

    #[test]
    fn k2_matches_bisection() {
        let h = planted(2, 5, 0.01);
        let cfg = ClusterConfig::default();
        let direct = hyperclus_g(&h, &cfg).unwrap();
        assert_eq!(kway_recursive_largest(&h, 2, &cfg).unwrap(), direct);
        assert_eq!(kway_best_split(&h, 2, &cfg).unwrap(), direct);
    }

    #[test]
    fn planted_communities_are_recovered() {
        let h = planted(4, 6, 1e-4);
        let cfg = ClusterConfig::default();
        for strategy in [KwayStrategy::Largest, KwayStrategy::Best] {
            let part = kway(&h, 4, strategy, &HyperClusG(cfg.clone())).unwrap();
            assert_eq!(part.k(), 4);
            for cluster in part.clusters() {
                let block = cluster[0] / 6;
                assert_eq!(cluster, (block * 6..block * 6 + 6).collect::<Vec<_>>(), "{strategy:?}");
            }
        }
    }

    #[test]
    fn invalid_k() {
        let h = two_vertex();
        let cfg = ClusterConfig::default();
        assert!(matches!(kway_best_split(&h, 1, &cfg), Err(Error::InvalidK { .. })));
        assert!(matches!(kway_best_split(&h, 3, &cfg), Err(Error::UnsplittableCluster(_))));
    }

    #[test]
    fn singleton_clusters_are_unsplittable() {
        // three vertices, k = 3: after the first split one side is a single
        // vertex and the other must be split
        let h = build_hypergraph(
            vec![Hyperedge::unit(1.0, [0, 1]), Hyperedge::unit(1.0, [1, 2])],
            3,
            ValidationPolicy::Strict,
        )
        .unwrap();
        let part = kway_best_split(&h, 3, &ClusterConfig::default()).unwrap();
        assert_eq!(part.cluster_sizes(), vec![1, 1, 1]);
    }

    #[test]
    fn restricted_components_split_isolated_vertices() {
        let h = planted(2, 3, 0.5);
        // {0, 1, 4}: 0 and 1 share edges, 4 only meets them through 3
        assert_eq!(restricted_components(&h, &[0, 1, 4]), vec![vec![0, 1], vec![4]]);
    }
}
