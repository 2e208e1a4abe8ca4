//! Second eigenpair of a symmetric PSD matrix with a known simple null
//! vector.
//!
//! Small problems go through a dense symmetric eigendecomposition. Larger
//! ones use Lanczos with full reorthogonalization, working inside the
//! orthogonal complement of the null vector so the zero eigenvalue never
//! enters the Krylov space. The Ritz vector seeds an explicit restart when
//! the residual is still above the requested tolerance.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::laplacian::{quadratic_form, SymLaplacian};
use crate::sparse::CsrMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Residual the solver iterates towards.
    pub tol: f64,
    /// Residual still accepted once restarts are exhausted.
    pub accept_tol: f64,
    /// Problems with at most this many rows use the dense path.
    pub dense_threshold: usize,
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Seed of the Lanczos start vector.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-10,
            accept_tol: 1e-8,
            dense_threshold: 64,
            krylov_dim: 80,
            max_restarts: 200,
            seed: 0x5eed,
        }
    }
}

impl SolverConfig {
    /// Same tolerances, Lanczos at every size.
    pub fn krylov_only(&self) -> Self {
        SolverConfig {
            dense_threshold: 0,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// Unit-norm eigenvector, orthogonal to the null vector.
    pub vector: Vec<f64>,
    /// `‖A z − λ z‖₂`
    pub residual: f64,
}

/// Eigenvalues at or below this are treated as a second zero eigenvalue.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-12;

/// `λ₂` and its eigenvector for `L_sym`, deflating `√φ`.
pub fn second_eigenpair(lsym: &SymLaplacian, config: &SolverConfig) -> Result<EigenPair> {
    second_eigenpair_of(lsym.csr(), lsym.sqrt_phi(), config)
}

pub(crate) fn second_eigenpair_of(
    a: &CsrMatrix,
    null: &[f64],
    config: &SolverConfig,
) -> Result<EigenPair> {
    let n = a.n_rows();
    assert!(n >= 2, "second eigenpair needs at least two rows");
    let q0 = normalized(null);
    let (value, mut vector) = if n <= config.dense_threshold {
        dense_second(a)
    } else {
        lanczos_second(a, &q0, config)?
    };
    project_out(&mut vector, &q0);
    normalize(&mut vector);
    let (rayleigh, residual) = rayleigh_residual(a, &vector);
    let value = if n <= config.dense_threshold { value } else { rayleigh };
    if value <= ZERO_EIGENVALUE_TOL {
        return Err(Error::DisconnectedSpectrum { lambda: value });
    }
    if residual > config.accept_tol {
        return Err(Error::NotConverged {
            what: "second eigenpair",
            iterations: 0,
            residual,
        });
    }
    Ok(EigenPair {
        value,
        vector,
        residual,
    })
}

fn dense_second(a: &CsrMatrix) -> (f64, Vec<f64>) {
    let eig = SymmetricEigen::new(a.to_dense());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let idx = order[1];
    (
        eig.eigenvalues[idx],
        eig.eigenvectors.column(idx).iter().copied().collect(),
    )
}

fn lanczos_second(a: &CsrMatrix, q0: &[f64], config: &SolverConfig) -> Result<(f64, Vec<f64>)> {
    let n = a.n_rows();
    // the complement of q0 has dimension n − 1
    let dim = config.krylov_dim.clamp(1, n - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut start: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();

    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    let mut total_steps = 0;
    for _ in 0..=config.max_restarts {
        let (theta, x, exhausted, steps) = lanczos_pass(a, q0, &start, dim);
        total_steps += steps;
        let (_, residual) = rayleigh_residual(a, &x);
        if best.as_ref().is_none_or(|b| residual < b.2) {
            best = Some((theta, x.clone(), residual));
        }
        if residual <= config.tol || exhausted {
            break;
        }
        start = x;
    }
    let (theta, x, residual) = best.expect("at least one Lanczos pass");
    if residual <= config.accept_tol {
        Ok((theta, x))
    } else {
        Err(Error::NotConverged {
            what: "Lanczos second eigenpair",
            iterations: total_steps,
            residual,
        })
    }
}

/// One Lanczos run of at most `dim` steps from `start`. Returns the
/// smallest Ritz pair and whether the Krylov space became invariant.
fn lanczos_pass(a: &CsrMatrix, q0: &[f64], start: &[f64], dim: usize) -> (f64, Vec<f64>, bool, usize) {
    let mut v = start.to_vec();
    project_out(&mut v, q0);
    project_out(&mut v, q0);
    normalize(&mut v);

    let mut basis: Vec<Vec<f64>> = vec![v];
    let mut alphas = Vec::with_capacity(dim);
    let mut betas: Vec<f64> = Vec::with_capacity(dim);
    let mut exhausted = false;
    for j in 0..dim {
        let mut w = a.mul_vec(&basis[j]);
        let alpha = dot(&w, &basis[j]);
        alphas.push(alpha);
        // two rounds of classical Gram-Schmidt against q0 and the basis
        for _ in 0..2 {
            project_out(&mut w, q0);
            for b in &basis {
                let c = dot(&w, b);
                axpy(&mut w, -c, b);
            }
        }
        let beta = norm(&w);
        if beta <= 1e-12 * alpha.abs().max(1.0) || j + 1 == dim {
            exhausted = beta <= 1e-12 * alpha.abs().max(1.0) || basis.len() == q0.len() - 1;
            break;
        }
        betas.push(beta);
        for x in w.iter_mut() {
            *x /= beta;
        }
        basis.push(w);
    }

    let k = alphas.len();
    let mut t = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alphas[i];
        if i + 1 < k {
            t[(i, i + 1)] = betas[i];
            t[(i + 1, i)] = betas[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let (idx, theta) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty tridiagonal");
    let mut x = vec![0.0; q0.len()];
    for (i, b) in basis.iter().take(k).enumerate() {
        axpy(&mut x, eig.eigenvectors[(i, idx)], b);
    }
    normalize(&mut x);
    (theta, x, exhausted, k)
}

/// `(zᵀAz, ‖Az − (zᵀAz) z‖₂)` for unit `z`.
fn rayleigh_residual(a: &CsrMatrix, z: &[f64]) -> (f64, f64) {
    let az = a.mul_vec(z);
    let lambda = quadratic_form(a, z);
    let residual = az
        .iter()
        .zip(z)
        .map(|(x, y)| (x - lambda * y).powi(2))
        .sum::<f64>()
        .sqrt();
    (lambda, residual)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn normalize(x: &mut [f64]) {
    let n = norm(x);
    for v in x.iter_mut() {
        *v /= n;
    }
}

fn normalized(x: &[f64]) -> Vec<f64> {
    let mut y = x.to_vec();
    normalize(&mut y);
    y
}

fn project_out(x: &mut [f64], unit: &[f64]) {
    let c = dot(x, unit);
    axpy(x, -c, unit);
}
