use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::hypergraph::EdvwHypergraph;
use crate::metrics::ClusterQuality;
use crate::spectral::{hyperclus_g_on, ClusterConfig, SpectralModel};
use crate::{Error, Result};

/// Enumeration is exponential; larger inputs are refused.
pub const MAX_ORACLE_VERTICES: usize = 20;

/// Slack on both Cheeger bounds and on the relaxation sandwich.
pub const BOUND_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    /// Minimizer containing vertex 0 (complements score the same).
    pub best_ncut_set: Vec<usize>,
    pub best_ncut: f64,
    pub best_conductance_set: Vec<usize>,
    /// `Φ(H)`
    pub best_conductance: f64,
    /// `λ₂` from a dense route independent of the sparse pipeline.
    pub lambda2_dense: f64,
    /// NCut of the HyperClus-G bipartition.
    pub hyperclus_ncut: f64,
    pub hyperclus_set: Vec<usize>,
    /// `Φ²/2 − ε ≤ λ₂ ≤ 2Φ + ε`
    pub cheeger_ok: bool,
    /// `λ₂/2 − ε ≤ NCut* ≤ NCut(HyperClus-G) + ε`
    pub relaxation_ok: bool,
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "best ncut         {:.12} at {:?}", self.best_ncut, self.best_ncut_set)?;
        writeln!(
            f,
            "best conductance  {:.12} at {:?}",
            self.best_conductance, self.best_conductance_set
        )?;
        writeln!(f, "lambda2 (dense)   {:.12}", self.lambda2_dense)?;
        writeln!(f, "hyperclus-g ncut  {:.12} at {:?}", self.hyperclus_ncut, self.hyperclus_set)?;
        writeln!(f, "cheeger           {}", if self.cheeger_ok { "ok" } else { "VIOLATED" })?;
        write!(f, "relaxation        {}", if self.relaxation_ok { "ok" } else { "VIOLATED" })
    }
}

/// Exact NCut and conductance minima by enumerating every bipartition,
/// plus the bounds that tie them to `λ₂`.
///
/// Metrics use the pipeline's `φ` and `P`; `λ₂` comes from
/// [`dense_lambda2`].
pub fn brute_force_optima(h: &EdvwHypergraph) -> Result<OracleReport> {
    brute_force_with(h, &ClusterConfig::default())
}

pub fn brute_force_with(h: &EdvwHypergraph, config: &ClusterConfig) -> Result<OracleReport> {
    let n = h.n_vertices();
    if n > MAX_ORACLE_VERTICES {
        return Err(Error::TooLarge {
            n,
            max: MAX_ORACLE_VERTICES,
        });
    }
    let model = SpectralModel::build(h, config)?;
    let (ncut_mask, best_ncut, cond_mask, best_conductance) = enumerate(&model, n)?;
    let lambda2_dense = dense_lambda2(h)?;

    let part = hyperclus_g_on(&model, config)?;
    let hyperclus_set: Vec<usize> = (0..n).filter(|&u| part.labels()[u] == 0).collect();
    let mut mask = vec![false; n];
    for &u in &hyperclus_set {
        mask[u] = true;
    }
    let hyperclus_ncut = ClusterQuality::evaluate_mask(&model.phi, &model.p, &mask)?.ncut;

    let cheeger_ok = best_conductance * best_conductance / 2.0 - BOUND_EPS <= lambda2_dense
        && lambda2_dense <= 2.0 * best_conductance + BOUND_EPS;
    let relaxation_ok = lambda2_dense / 2.0 - BOUND_EPS <= best_ncut && best_ncut <= hyperclus_ncut + BOUND_EPS;
    Ok(OracleReport {
        best_ncut_set: mask_to_set(ncut_mask, n),
        best_ncut,
        best_conductance_set: mask_to_set(cond_mask, n),
        best_conductance,
        lambda2_dense,
        hyperclus_ncut,
        hyperclus_set,
        cheeger_ok,
        relaxation_ok,
    })
}

/// Sets are `{0} ∪ bits(m << 1)` for `m` ascending, so the first minimum
/// found is the lowest set in binary order.
fn enumerate(model: &SpectralModel, n: usize) -> Result<(u32, f64, u32, f64)> {
    let count = 1u32 << (n - 1);
    let mut best_ncut = (0, f64::INFINITY);
    let mut best_cond = (0, f64::INFINITY);
    let mut mask = vec![false; n];
    // the last m would put every vertex in S
    for m in 0..count - 1 {
        let bits = (m << 1) | 1;
        for (u, slot) in mask.iter_mut().enumerate() {
            *slot = bits >> u & 1 == 1;
        }
        let q = ClusterQuality::evaluate_mask(&model.phi, &model.p, &mask)?;
        if q.ncut < best_ncut.1 {
            best_ncut = (bits, q.ncut);
        }
        if q.conductance < best_cond.1 {
            best_cond = (bits, q.conductance);
        }
    }
    Ok((best_ncut.0, best_ncut.1, best_cond.0, best_cond.1))
}

fn mask_to_set(bits: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&u| bits >> u & 1 == 1).collect()
}

/// `λ₂` of `L_sym` computed densely from the hyperedges: `P` summed
/// directly, `φ` as the null vector of `(P − I)ᵀ` by LU, and a full
/// symmetric eigendecomposition.
pub fn dense_lambda2(h: &EdvwHypergraph) -> Result<f64> {
    Ok(dense_spectrum(h)?[1])
}

/// Ascending eigenvalues of `L_sym` by the dense route.
pub fn dense_spectrum(h: &EdvwHypergraph) -> Result<Vec<f64>> {
    let (p, phi) = dense_walk(h)?;
    let n = phi.len();
    let mut lsym = DMatrix::zeros(n, n);
    for u in 0..n {
        for v in 0..n {
            let sym = 0.5 * (phi[u] * p[(u, v)] + phi[v] * p[(v, u)]);
            let l = if u == v { phi[u] - sym } else { -sym };
            lsym[(u, v)] = l / (phi[u] * phi[v]).sqrt();
        }
    }
    let mut values: Vec<f64> = SymmetricEigen::new(lsym).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Dense `P` and `φ` for `h`.
pub fn dense_walk(h: &EdvwHypergraph) -> Result<(DMatrix<f64>, Vec<f64>)> {
    h.require_connected()?;
    let n = h.n_vertices();
    let d = h.vertex_degrees();
    let mut p = DMatrix::zeros(n, n);
    for e in h.edges() {
        let delta = e.degree();
        for u in e.vertices() {
            for &(v, g) in e.members() {
                p[(u, v)] += e.weight() / d[u] * g / delta;
            }
        }
    }
    let mut a = (&p - DMatrix::identity(n, n)).transpose();
    a.row_mut(n - 1).fill(1.0);
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let phi = a.lu().solve(&b).ok_or(Error::Disconnected {
        component_sizes: vec![n],
    })?;
    Ok((p, phi.iter().copied().collect()))
}
