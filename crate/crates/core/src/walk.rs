//! The EDVW random walk: pick an incident edge with probability
//! `ω(e)/d(u)`, then a member with probability `γ_e(v)/δ(e)`.

use nalgebra::DMatrix;

use crate::hypergraph::IncidenceSystem;
use crate::sparse::CsrMatrix;
use crate::{Error, Result};

/// Row-stochastic transition matrix `P = D_V⁻¹ W D_E⁻¹ R`.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    p: CsrMatrix,
}

impl TransitionMatrix {
    /// Wraps an arbitrary square matrix. Used for pairwise graph walks and
    /// tests; no stochasticity check is made.
    pub fn from_csr(p: CsrMatrix) -> Self {
        assert_eq!(p.n_rows(), p.n_cols());
        TransitionMatrix { p }
    }

    pub fn csr(&self) -> &CsrMatrix {
        &self.p
    }

    pub fn n(&self) -> usize {
        self.p.n_rows()
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.p.get(u, v)
    }

    /// `max_u |Σ_v P(u,v) − 1|`
    pub fn max_row_sum_error(&self) -> f64 {
        self.p
            .row_sums()
            .into_iter()
            .map(|s| (s - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

pub fn transition_matrix(inc: &IncidenceSystem) -> TransitionMatrix {
    let n = inc.d_v.len();
    // scratch row with a touched-list keeps each row O(Σ_{e∋u} |e|)
    let mut scratch = vec![0.0; n];
    let mut touched = Vec::new();
    let mut rows = Vec::with_capacity(n);
    for u in 0..n {
        for (e, omega) in inc.w.row_iter(u) {
            let edge_prob = omega / inc.d_v[u];
            for (v, gamma) in inc.r.row_iter(e) {
                if scratch[v] == 0.0 {
                    touched.push(v);
                }
                scratch[v] += edge_prob * (gamma / inc.d_e[e]);
            }
        }
        touched.sort_unstable();
        let row: Vec<(usize, f64)> = touched.iter().map(|&v| (v, scratch[v])).collect();
        for &v in &touched {
            scratch[v] = 0.0;
        }
        touched.clear();
        rows.push(row);
    }
    TransitionMatrix {
        p: CsrMatrix::from_rows(n, rows),
    }
}

/// `φ` with `φP = φ`, `φ > 0`, `Σφ = 1`.
#[derive(Debug, Clone)]
pub struct StationaryDistribution {
    phi: Vec<f64>,
    /// `‖φP − φ‖₁` at termination.
    pub residual: f64,
    pub iterations: usize,
}

impl StationaryDistribution {
    /// Wraps a known distribution (normalized here) with its residual
    /// against `p`.
    pub fn from_vec(p: &TransitionMatrix, mut phi: Vec<f64>) -> Self {
        normalize_l1(&mut phi);
        let residual = l1_distance(&p.csr().vec_mul(&phi), &phi);
        StationaryDistribution {
            phi,
            residual,
            iterations: 0,
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.phi
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.phi
    }
}

impl std::ops::Index<usize> for StationaryDistribution {
    type Output = f64;

    fn index(&self, u: usize) -> &f64 {
        &self.phi[u]
    }
}

pub const DEFAULT_STATIONARY_TOL: f64 = 1e-10;

pub fn default_max_iter(n: usize) -> usize {
    100 * n + 1000
}

/// Power iteration on the lazy walk `(P + I)/2`, which shares `P`'s
/// stationary distribution but is aperiodic. Starts from the uniform vector
/// and stops once `‖φP − φ‖₁ ≤ tol`.
///
/// A reducible walk is rejected with [`Error::Disconnected`] before
/// iterating.
pub fn stationary_distribution(
    p: &TransitionMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<StationaryDistribution> {
    let n = p.n();
    stationary_from(p, vec![1.0 / n as f64; n], tol, max_iter)
}

/// Chains with at most this many states are solved directly to seed the
/// power iteration.
pub const DIRECT_SOLVE_LIMIT: usize = 1500;

/// Stationary distribution of an EDVW walk, robust to slow mixing.
///
/// `P = A·B` with `A = D_V⁻¹W` and `B = D_E⁻¹R`, so `ψ = φA` is stationary
/// for the `|E|×|E|` chain `B·A` and `φ = ψB`. When that chain (or `P`
/// itself) is small, it is solved exactly by GTH elimination and the result
/// seeds the lazy power iteration, which then only has to confirm the
/// tolerance. Larger problems start from the uniform vector as in
/// [`stationary_distribution`].
pub fn edvw_stationary_distribution(
    inc: &IncidenceSystem,
    p: &TransitionMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<StationaryDistribution> {
    let n = p.n();
    let m = inc.d_e.len();
    let start = if m <= DIRECT_SOLVE_LIMIT && m < n {
        gth_stationary(edge_chain(inc)).map(|psi| inc.r.vec_mul(&psi.iter().zip(&inc.d_e).map(|(x, d)| x / d).collect::<Vec<_>>()))
    } else if n <= DIRECT_SOLVE_LIMIT {
        gth_stationary(p.csr().to_dense())
    } else {
        None
    };
    let start = match start {
        Some(phi) if phi.iter().all(|&x| x > 0.0) => phi,
        _ => vec![1.0 / n as f64; n],
    };
    stationary_from(p, start, tol, max_iter)
}

/// Dense `|E|×|E|` matrix `D_E⁻¹ R D_V⁻¹ W`.
fn edge_chain(inc: &IncidenceSystem) -> DMatrix<f64> {
    let m = inc.d_e.len();
    let mut q = DMatrix::zeros(m, m);
    for e in 0..m {
        for (v, gamma) in inc.r.row_iter(e) {
            let to_vertex = gamma / inc.d_e[e];
            for (f, omega) in inc.w.row_iter(v) {
                q[(e, f)] += to_vertex * omega / inc.d_v[v];
            }
        }
    }
    q
}

/// Grassmann–Taksar–Heyman elimination. Subtraction-free, so the result is
/// accurate even for nearly decoupled chains. `None` for a reducible chain.
fn gth_stationary(mut a: DMatrix<f64>) -> Option<Vec<f64>> {
    let k = a.nrows();
    for l in (1..k).rev() {
        let s: f64 = (0..l).map(|j| a[(l, j)]).sum();
        if !(s > 0.0) {
            return None;
        }
        for i in 0..l {
            a[(i, l)] /= s;
        }
        for i in 0..l {
            let ail = a[(i, l)];
            if ail == 0.0 {
                continue;
            }
            for j in 0..l {
                a[(i, j)] += ail * a[(l, j)];
            }
        }
    }
    let mut x = vec![0.0; k];
    x[0] = 1.0;
    for l in 1..k {
        x[l] = (0..l).map(|i| x[i] * a[(i, l)]).sum();
    }
    normalize_l1(&mut x);
    Some(x)
}

fn stationary_from(
    p: &TransitionMatrix,
    mut phi: Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<StationaryDistribution> {
    let component_sizes = pattern_components(p.csr());
    if component_sizes.len() > 1 {
        return Err(Error::Disconnected { component_sizes });
    }
    normalize_l1(&mut phi);
    let mut iterations = 0;
    loop {
        let next = p.csr().vec_mul(&phi);
        let residual = l1_distance(&next, &phi);
        if residual <= tol {
            if let Some(vertex) = phi.iter().position(|&x| !(x > 0.0)) {
                return Err(Error::DegenerateStationary {
                    vertex,
                    value: phi[vertex],
                });
            }
            return Ok(StationaryDistribution {
                phi,
                residual,
                iterations,
            });
        }
        if iterations >= max_iter {
            return Err(Error::NotConverged {
                what: "stationary distribution",
                iterations,
                residual,
            });
        }
        for (x, y) in phi.iter_mut().zip(next) {
            *x = 0.5 * (*x + y);
        }
        normalize_l1(&mut phi);
        iterations += 1;
    }
}

/// Stationary probability flux across the boundary of `set`: returns
/// `(Σ_{u∈S,v∉S} φ(u)P(u,v), Σ_{u∉S,v∈S} φ(u)P(u,v))`.
pub fn boundary_flux(
    phi: &StationaryDistribution,
    p: &TransitionMatrix,
    set: &[usize],
) -> (f64, f64) {
    let mask = membership_mask(p.n(), set);
    let mut out_flux = 0.0;
    let mut in_flux = 0.0;
    for u in 0..p.n() {
        for (v, puv) in p.csr().row_iter(u) {
            match (mask[u], mask[v]) {
                (true, false) => out_flux += phi[u] * puv,
                (false, true) => in_flux += phi[u] * puv,
                _ => {}
            }
        }
    }
    (out_flux, in_flux)
}

/// Component sizes of the undirected nonzero pattern. For hypergraph walks
/// the pattern is symmetric, so this is also strong connectivity.
fn pattern_components(m: &CsrMatrix) -> Vec<usize> {
    let n = m.n_rows();
    let t = m.transpose();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &v in m.row(u).0.iter().chain(t.row(u).0) {
                if !std::mem::replace(&mut seen[v], true) {
                    stack.push(v);
                }
            }
        }
        sizes.push(size);
    }
    sizes
}

pub(crate) fn membership_mask(n: usize, set: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in set {
        mask[v] = true;
    }
    mask
}

fn normalize_l1(x: &mut [f64]) {
    let total: f64 = x.iter().sum();
    for v in x.iter_mut() {
        *v /= total;
    }
}

fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
