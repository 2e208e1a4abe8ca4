//! Cluster quality: volumes, boundary volume, normalized cut, conductance,
//! and greedy F1 matching against ground-truth classes.
//!
//! The boundary volume is taken as the mean of the outgoing and incoming
//! stationary flux. The two agree at stationarity; averaging makes
//! `|∂S| = |∂S̄|` hold bit-for-bit, so every measure here is exactly
//! complement symmetric.

use crate::walk::{membership_mask, StationaryDistribution, TransitionMatrix};
use crate::{Error, Result};

/// `vol(S) = Σ_{u∈S} φ(u)`
pub fn set_volume(phi: &StationaryDistribution, set: &[usize]) -> f64 {
    set.iter().map(|&u| phi[u]).sum()
}

/// `|∂S|`, the stationary flux between `S` and its complement.
pub fn boundary_volume(phi: &StationaryDistribution, p: &TransitionMatrix, set: &[usize]) -> f64 {
    boundary_volume_mask(phi, p, &membership_mask(p.n(), set))
}

pub(crate) fn boundary_volume_mask(phi: &StationaryDistribution, p: &TransitionMatrix, mask: &[bool]) -> f64 {
    let mut out_flux = 0.0;
    let mut in_flux = 0.0;
    for u in 0..p.n() {
        for (v, puv) in p.csr().row_iter(u) {
            if mask[u] != mask[v] {
                if mask[u] {
                    out_flux += phi[u] * puv;
                } else {
                    in_flux += phi[u] * puv;
                }
            }
        }
    }
    // order-independent: a + b == b + a
    0.5 * (out_flux + in_flux)
}

/// All the bipartition measures of one set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterQuality {
    pub ncut: f64,
    pub conductance: f64,
    pub boundary_volume: f64,
    pub vol_s: f64,
    pub vol_complement: f64,
}

impl ClusterQuality {
    pub fn evaluate(phi: &StationaryDistribution, p: &TransitionMatrix, set: &[usize]) -> Result<Self> {
        Self::evaluate_mask(phi, p, &membership_mask(p.n(), set))
    }

    pub(crate) fn evaluate_mask(phi: &StationaryDistribution, p: &TransitionMatrix, mask: &[bool]) -> Result<Self> {
        let inside = mask.iter().filter(|&&m| m).count();
        if inside == 0 || inside == mask.len() {
            return Err(Error::TrivialPartition);
        }
        let mut vol_s = 0.0;
        let mut vol_complement = 0.0;
        for (u, &m) in mask.iter().enumerate() {
            if m {
                vol_s += phi[u];
            } else {
                vol_complement += phi[u];
            }
        }
        let boundary = boundary_volume_mask(phi, p, mask);
        Ok(ClusterQuality {
            ncut: (1.0 / vol_s + 1.0 / vol_complement) * boundary,
            conductance: boundary / vol_s.min(vol_complement),
            boundary_volume: boundary,
            vol_s,
            vol_complement,
        })
    }
}

/// `NCut(S, S̄) = (1/vol(S) + 1/vol(S̄))·|∂S|`
pub fn ncut2(phi: &StationaryDistribution, p: &TransitionMatrix, set: &[usize]) -> Result<f64> {
    ClusterQuality::evaluate(phi, p, set).map(|q| q.ncut)
}

/// `Φ(S) = |∂S| / min(vol(S), vol(S̄))`
pub fn conductance(phi: &StationaryDistribution, p: &TransitionMatrix, set: &[usize]) -> Result<f64> {
    ClusterQuality::evaluate(phi, p, set).map(|q| q.conductance)
}

/// k-way normalized cut `Σ_i |∂S_i| / vol(S_i)` for cluster ids `0..k`.
pub fn ncut_k(phi: &StationaryDistribution, p: &TransitionMatrix, labels: &[usize]) -> Result<f64> {
    if labels.len() != p.n() {
        return Err(Error::LengthMismatch {
            expected: p.n(),
            actual: labels.len(),
        });
    }
    let k = labels.iter().max().map_or(0, |&m| m + 1);
    let mut volume = vec![0.0; k];
    let mut out_flux = vec![0.0; k];
    let mut in_flux = vec![0.0; k];
    for u in 0..p.n() {
        volume[labels[u]] += phi[u];
        for (v, puv) in p.csr().row_iter(u) {
            if labels[u] != labels[v] {
                let flow = phi[u] * puv;
                out_flux[labels[u]] += flow;
                in_flux[labels[v]] += flow;
            }
        }
    }
    if let Some(empty) = (0..k).find(|&c| !labels.contains(&c)) {
        return Err(Error::EmptyCluster(empty));
    }
    Ok((0..k)
        .map(|c| 0.5 * (out_flux[c] + in_flux[c]) / volume[c])
        .sum())
}

/// The two-valued vector `x_S` with `x(u) = √(vol S̄ / vol S)` on `S` and
/// `−√(vol S / vol S̄)` off it. Half its Rayleigh quotient is `NCut(S, S̄)`.
pub fn ncut_indicator(phi: &StationaryDistribution, set: &[usize]) -> Result<Vec<f64>> {
    let mask = membership_mask(phi.len(), set);
    let inside = mask.iter().filter(|&&m| m).count();
    if inside == 0 || inside == mask.len() {
        return Err(Error::TrivialPartition);
    }
    let vol_s: f64 = (0..phi.len()).filter(|&u| mask[u]).map(|u| phi[u]).sum();
    let vol_c: f64 = (0..phi.len()).filter(|&u| !mask[u]).map(|u| phi[u]).sum();
    let pos = (vol_c / vol_s).sqrt();
    let neg = -(vol_s / vol_c).sqrt();
    Ok(mask.iter().map(|&m| if m { pos } else { neg }).collect())
}

/// F1 score of a predicted set against a class, `0` when they do not meet.
pub fn f1_score(true_positive: usize, predicted: usize, actual: usize) -> f64 {
    if true_positive == 0 {
        return 0.0;
    }
    let precision = true_positive as f64 / predicted as f64;
    let recall = true_positive as f64 / actual as f64;
    2.0 * precision * recall / (precision + recall)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterMatch {
    pub cluster: usize,
    pub class: usize,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct F1Report {
    /// One entry per matched pair, ordered by class id.
    pub matches: Vec<ClusterMatch>,
    /// `Σ_i |V_i| / Σ_j |V_j| · F1(match of V_i)`; unmatched classes count 0.
    pub weighted_f1: f64,
}

impl F1Report {
    pub fn f1s(&self) -> Vec<f64> {
        self.matches.iter().map(|m| m.f1).collect()
    }
}

/// Greedy one-to-one matching of clusters to classes: repeatedly commit the
/// largest remaining entry of the F1 matrix. Ties go to the lowest
/// `(cluster, class)` pair.
pub fn greedy_f1_match(pred: &[usize], truth: &[usize]) -> Result<F1Report> {
    if pred.len() != truth.len() {
        return Err(Error::LengthMismatch {
            expected: truth.len(),
            actual: pred.len(),
        });
    }
    let n_clusters = pred.iter().max().map_or(0, |&m| m + 1);
    let n_classes = truth.iter().max().map_or(0, |&m| m + 1);
    let mut overlap = vec![vec![0usize; n_classes]; n_clusters];
    let mut cluster_size = vec![0usize; n_clusters];
    let mut class_size = vec![0usize; n_classes];
    for (&c, &t) in pred.iter().zip(truth) {
        overlap[c][t] += 1;
        cluster_size[c] += 1;
        class_size[t] += 1;
    }
    let f1: Vec<Vec<f64>> = (0..n_clusters)
        .map(|i| {
            (0..n_classes)
                .map(|j| f1_score(overlap[i][j], cluster_size[i], class_size[j]))
                .collect()
        })
        .collect();
    Ok(greedy_match_matrix(&f1, &class_size))
}

/// Greedy matching on a precomputed F1 matrix (`f1[cluster][class]`).
/// Empty clusters or classes never take part.
pub fn greedy_match_matrix(f1: &[Vec<f64>], class_size: &[usize]) -> F1Report {
    let mut entries: Vec<(usize, usize)> = (0..f1.len())
        .flat_map(|i| (0..class_size.len()).map(move |j| (i, j)))
        .collect();
    // stable sort keeps lexicographic order among equal scores
    entries.sort_by(|a, b| f1[b.0][b.1].total_cmp(&f1[a.0][a.1]));

    let mut cluster_used = vec![false; f1.len()];
    let mut class_used = vec![false; class_size.len()];
    let mut matches = Vec::new();
    for (i, j) in entries {
        if cluster_used[i] || class_used[j] || class_size[j] == 0 {
            continue;
        }
        cluster_used[i] = true;
        class_used[j] = true;
        matches.push(ClusterMatch {
            cluster: i,
            class: j,
            f1: f1[i][j],
        });
    }
    matches.sort_by_key(|m| m.class);
    let total: usize = class_size.iter().sum();
    let weighted_f1 = matches
        .iter()
        .map(|m| class_size[m.class] as f64 / total as f64 * m.f1)
        .sum();
    F1Report {
        matches,
        weighted_f1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{build_hypergraph, incidence_matrices, Hyperedge, ValidationPolicy};
    use crate::walk::{stationary_distribution, transition_matrix};

    fn two_vertex() -> (StationaryDistribution, TransitionMatrix) {
        let h = build_hypergraph(vec![Hyperedge::unit(1.0, [0, 1])], 2, ValidationPolicy::Strict)
            .unwrap();
        let p = transition_matrix(&incidence_matrices(&h));
        (stationary_distribution(&p, 1e-12, 100).unwrap(), p)
    }

    #[test]
    fn volumes() {
        let (phi, p) = two_vertex();
        assert_eq!(set_volume(&phi, &[0, 1]), 1.0);
        assert_eq!(set_volume(&phi, &[]), 0.0);
        assert_eq!(set_volume(&phi, &[0]), 0.5);
        assert_eq!(boundary_volume(&phi, &p, &[0]), 0.25);
        assert_eq!(boundary_volume(&phi, &p, &[0, 1]), 0.0);
    }

    #[test]
    fn two_vertex_cuts() {
        let (phi, p) = two_vertex();
        assert_eq!(ncut2(&phi, &p, &[0]).unwrap(), 1.0);
        assert_eq!(conductance(&phi, &p, &[0]).unwrap(), 0.5);
        assert_eq!(ncut_k(&phi, &p, &[0, 1]).unwrap(), 1.0);
        assert_eq!(ncut_k(&phi, &p, &[0, 0]).unwrap(), 0.0);
        assert!(matches!(ncut2(&phi, &p, &[]), Err(Error::TrivialPartition)));
        assert!(matches!(conductance(&phi, &p, &[0, 1]), Err(Error::TrivialPartition)));
        assert!(matches!(ncut_k(&phi, &p, &[0, 2]), Err(Error::EmptyCluster(1))));
    }

    #[test]
    fn identity_prediction_scores_one() {
        let truth = [0, 0, 1, 2, 2, 1];
        let report = greedy_f1_match(&truth, &truth).unwrap();
        assert!(report.matches.iter().all(|m| m.f1 == 1.0 && m.cluster == m.class));
        assert_eq!(report.weighted_f1, 1.0);
    }

    #[test]
    fn worked_greedy_example() {
        let f1 = vec![
            vec![0.0, 0.9, 0.0],
            vec![0.8, 0.0, 0.0],
            vec![0.0, 0.7, 0.6],
        ];
        let report = greedy_match_matrix(&f1, &[1, 1, 1]);
        let pairs: Vec<_> = report.matches.iter().map(|m| (m.cluster, m.class)).collect();
        assert_eq!(pairs, vec![(1, 0), (0, 1), (2, 2)]);
        assert!((report.weighted_f1 - (0.8 + 0.9 + 0.6) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ties_prefer_lowest_pair() {
        let f1 = vec![vec![0.5, 0.5], vec![0.5, 0.5]];
        let report = greedy_match_matrix(&f1, &[2, 2]);
        let pairs: Vec<_> = report.matches.iter().map(|m| (m.cluster, m.class)).collect();
        assert_eq!(pairs, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn unequal_cluster_counts_zero_fill() {
        // three classes, two clusters: one class is left without a match
        let truth = [0, 0, 1, 1, 2, 2];
        let pred = [0, 0, 1, 1, 1, 1];
        let report = greedy_f1_match(&pred, &truth).unwrap();
        assert_eq!(report.matches.len(), 2);
        let expected = (2.0 * 1.0 + 2.0 * f1_score(2, 4, 2)) / 6.0;
        assert!((report.weighted_f1 - expected).abs() < 1e-15);
        assert!(matches!(
            greedy_f1_match(&pred[..3], &truth),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn indicator_recovers_ncut() {
        use crate::laplacian::rayleigh_quotient;
        let (phi, p) = two_vertex();
        let x = ncut_indicator(&phi, &[0]).unwrap();
        assert_eq!(x, vec![1.0, -1.0]);
        assert_eq!(rayleigh_quotient(&x, &phi, &p).unwrap() / 2.0, ncut2(&phi, &p, &[0]).unwrap());
        assert!(matches!(ncut_indicator(&phi, &[]), Err(Error::TrivialPartition)));
    }

    #[test]
    fn f1_definition() {
        assert_eq!(f1_score(0, 3, 4), 0.0);
        // precision 2/3, recall 1/2
        assert!((f1_score(2, 3, 4) - 4.0 / 7.0).abs() < 1e-15);
    }
}
