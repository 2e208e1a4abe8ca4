use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hypergraph::{build_hypergraph, EdvwHypergraph, Hyperedge, ValidationPolicy};
use crate::{Error, Result};

/// Attempts before [`random_hypergraph`] gives up on connectivity.
pub const MAX_RETRIES: usize = 1000;

/// Seeded random connected hypergraph. Edge sizes are uniform in
/// `[2, max_edge_size]` (capped at `n`), members are drawn without
/// replacement, and `ω`, `γ` are uniform in `(0, 1]`. Disconnected draws
/// are discarded and redrawn from the same stream.
pub fn random_hypergraph(n: usize, n_edges: usize, max_edge_size: usize, seed: u64) -> Result<EdvwHypergraph> {
    assert!(n >= 2, "random hypergraphs need at least two vertices");
    assert!(max_edge_size >= 2, "hyperedges need at least two members");
    let max_size = max_edge_size.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RETRIES {
        let edges = (0..n_edges)
            .map(|_| {
                let size = rng.random_range(2..=max_size);
                let members: Vec<usize> = sample(&mut rng, n, size).into_iter().collect();
                let omega = unit_interval(&mut rng);
                Hyperedge::new(omega, members.into_iter().map(|v| (v, unit_interval(&mut rng))).collect::<Vec<_>>())
            })
            .collect();
        match build_hypergraph(edges, n, ValidationPolicy::Strict) {
            Ok(h) if h.is_connected() => return Ok(h),
            _ => continue,
        }
    }
    Err(Error::GenerationFailed { retries: MAX_RETRIES })
}

/// Uniform in `(0, 1]`.
fn unit_interval(rng: &mut ChaCha8Rng) -> f64 {
    1.0 - rng.random::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_under_seed() {
        let a = random_hypergraph(5, 4, 3, 7).unwrap();
        let b = random_hypergraph(5, 4, 3, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_hypergraph(5, 4, 3, 8).unwrap());
    }

    #[test]
    fn two_vertices() {
        for seed in 0..5 {
            let h = random_hypergraph(2, 1, 2, seed).unwrap();
            assert_eq!(h.n_edges(), 1);
            assert_eq!(h.edges()[0].vertices().collect::<Vec<_>>(), vec![0, 1]);
        }
    }

    #[test]
    fn weights_in_range_and_connected() {
        for seed in 0..20 {
            let h = random_hypergraph(8, 8, 4, seed).unwrap();
            assert!(h.is_connected());
            for e in h.edges() {
                assert!((2..=4).contains(&e.len()));
                assert!(e.weight() > 0.0 && e.weight() <= 1.0);
                assert!(e.members().iter().all(|&(_, g)| g > 0.0 && g <= 1.0));
            }
        }
    }

    #[test]
    fn impossible_connectivity_fails() {
        // one edge of size 2 can never connect 5 vertices
        assert!(matches!(
            random_hypergraph(5, 1, 2, 0),
            Err(Error::GenerationFailed { retries: MAX_RETRIES })
        ));
    }
}
