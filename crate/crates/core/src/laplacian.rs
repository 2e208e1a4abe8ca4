//! Random-walk Laplacian `L = Π − (ΠP + PᵀΠ)/2`, its symmetric
//! normalization `Π^{-1/2} L Π^{-1/2}`, and the hypergraph Rayleigh
//! quotient.
//!
//! Both matrices are assembled so that `(u, v)` and `(v, u)` hold the same
//! bits: each off-diagonal entry is computed once from the pair
//! `(φ(u)P(u,v), φ(v)P(v,u))` and the sum is commutative.

use crate::sparse::CsrMatrix;
use crate::walk::{StationaryDistribution, TransitionMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct HypergraphLaplacian {
    l: CsrMatrix,
}

impl HypergraphLaplacian {
    pub fn csr(&self) -> &CsrMatrix {
        &self.l
    }

    /// `xᵀ L x`
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        quadratic_form(&self.l, x)
    }
}

#[derive(Debug, Clone)]
pub struct SymLaplacian {
    l_sym: CsrMatrix,
    sqrt_phi: Vec<f64>,
}

impl SymLaplacian {
    /// Wraps a symmetric PSD matrix together with a unit null vector.
    /// Graph Laplacians of the expansion baselines go through here.
    pub(crate) fn from_parts(l_sym: CsrMatrix, null_vector: Vec<f64>) -> Self {
        SymLaplacian {
            l_sym,
            sqrt_phi: null_vector,
        }
    }

    pub fn csr(&self) -> &CsrMatrix {
        &self.l_sym
    }

    /// `Π^{1/2} 𝟙`, the known null vector (unit norm since `Σφ = 1`).
    pub fn sqrt_phi(&self) -> &[f64] {
        &self.sqrt_phi
    }

    pub fn n(&self) -> usize {
        self.l_sym.n_rows()
    }
}

pub fn laplacian(p: &TransitionMatrix, phi: &StationaryDistribution) -> HypergraphLaplacian {
    let n = p.n();
    let flow = scale_rows(p.csr(), phi.as_slice());
    let flow_t = flow.transpose();
    let rows = (0..n)
        .map(|u| {
            let mut row = merge_rows(flow.row(u), flow_t.row(u))
                .map(|(v, a, b)| {
                    let sym = 0.5 * (a + b);
                    if u == v {
                        (v, phi[u] - sym)
                    } else {
                        (v, -sym)
                    }
                })
                .collect::<Vec<_>>();
            // Π contributes a diagonal even when P(u,u) = 0
            if let Err(pos) = row.binary_search_by_key(&u, |&(v, _)| v) {
                row.insert(pos, (u, phi[u]));
            }
            row
        })
        .collect();
    HypergraphLaplacian {
        l: CsrMatrix::from_rows(n, rows),
    }
}

/// Smallest stationary probability accepted before `Π^{-1/2}` is formed.
pub const MIN_STATIONARY: f64 = 1e-300;

pub fn sym_laplacian(l: &HypergraphLaplacian, phi: &StationaryDistribution) -> Result<SymLaplacian> {
    if let Some(vertex) = phi.as_slice().iter().position(|&x| !(x >= MIN_STATIONARY)) {
        return Err(Error::DegenerateStationary {
            vertex,
            value: phi[vertex],
        });
    }
    let sqrt_phi: Vec<f64> = phi.as_slice().iter().map(|x| x.sqrt()).collect();
    let n = sqrt_phi.len();
    let rows = (0..n)
        .map(|u| {
            l.l.row_iter(u)
                .map(|(v, x)| (v, x / (phi[u] * phi[v]).sqrt()))
                .collect()
        })
        .collect();
    Ok(SymLaplacian {
        l_sym: CsrMatrix::from_rows(n, rows),
        sqrt_phi,
    })
}

/// `Σ_{u,v} (x(u)−x(v))² φ(u)P(u,v) / Σ_u x(u)² φ(u)`, evaluated as the
/// direct double sum without going through `L`.
pub fn rayleigh_quotient(x: &[f64], phi: &StationaryDistribution, p: &TransitionMatrix) -> Result<f64> {
    assert_eq!(x.len(), p.n());
    let denominator: f64 = x.iter().zip(phi.as_slice()).map(|(xi, f)| xi * xi * f).sum();
    if denominator == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut numerator = 0.0;
    for u in 0..p.n() {
        for (v, puv) in p.csr().row_iter(u) {
            let diff = x[u] - x[v];
            numerator += diff * diff * phi[u] * puv;
        }
    }
    Ok(numerator / denominator)
}

/// `xᵀ Π x`
pub fn pi_norm_sq(x: &[f64], phi: &StationaryDistribution) -> f64 {
    x.iter().zip(phi.as_slice()).map(|(xi, f)| xi * xi * f).sum()
}

pub(crate) fn quadratic_form(m: &CsrMatrix, x: &[f64]) -> f64 {
    m.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
}

fn scale_rows(m: &CsrMatrix, scale: &[f64]) -> CsrMatrix {
    let rows = (0..m.n_rows())
        .map(|r| m.row_iter(r).map(|(c, v)| (c, scale[r] * v)).collect())
        .collect();
    CsrMatrix::from_rows(m.n_cols(), rows)
}

/// Sorted union of two sparse rows, yielding `(col, a, b)` with zeros for
/// missing sides.
fn merge_rows<'a>(
    a: (&'a [usize], &'a [f64]),
    b: (&'a [usize], &'a [f64]),
) -> impl Iterator<Item = (usize, f64, f64)> + 'a {
    let (mut i, mut j) = (0, 0);
    std::iter::from_fn(move || {
        let next = match (a.0.get(i), b.0.get(j)) {
            (None, None) => return None,
            (Some(&ca), Some(&cb)) if ca == cb => {
                i += 1;
                j += 1;
                (ca, a.1[i - 1], b.1[j - 1])
            }
            (Some(&ca), Some(&cb)) if ca < cb => {
                i += 1;
                (ca, a.1[i - 1], 0.0)
            }
            (Some(&ca), None) => {
                i += 1;
                (ca, a.1[i - 1], 0.0)
            }
            (_, Some(&cb)) => {
                j += 1;
                (cb, 0.0, b.1[j - 1])
            }
        };
        Some(next)
    })
}
