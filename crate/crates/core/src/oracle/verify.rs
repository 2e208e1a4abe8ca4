//! Seeded property suite over random hypergraphs, checked against the
//! brute-force oracle.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::brute::{brute_force_with, OracleReport, BOUND_EPS, MAX_ORACLE_VERTICES};
use super::random::random_hypergraph;
use crate::hypergraph::EdvwHypergraph;
use crate::laplacian::{pi_norm_sq, rayleigh_quotient};
use crate::metrics::{ncut_indicator, ClusterQuality};
use crate::spectral::{second_eigenpair, ClusterConfig, SpectralModel};
use crate::walk::boundary_flux;
use crate::{Error, Result};

/// Random subsets tested per instance for the flux and conductance checks.
pub const SUBSETS_PER_TRIAL: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Property {
    RowSum,
    FluxEquality,
    RayleighLaplacian,
    IndicatorNcut,
    ConductanceBound,
    Cheeger,
    Relaxation,
    SolverAgreement,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::RowSum,
        Property::FluxEquality,
        Property::RayleighLaplacian,
        Property::IndicatorNcut,
        Property::ConductanceBound,
        Property::Cheeger,
        Property::Relaxation,
        Property::SolverAgreement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::RowSum => "row-sum",
            Property::FluxEquality => "flux-equality",
            Property::RayleighLaplacian => "rayleigh-laplacian",
            Property::IndicatorNcut => "indicator-ncut",
            Property::ConductanceBound => "conductance-le-ncut",
            Property::Cheeger => "cheeger",
            Property::Relaxation => "relaxation-sandwich",
            Property::SolverAgreement => "solver-agreement",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Property::RowSum => "max_u |sum_v P(u,v) - 1| <= 1e-12",
            Property::FluxEquality => "|out_flux - in_flux| <= 1e-9",
            Property::RayleighLaplacian => "|R(x) - 2 x'Lx / x'Pi x| <= 1e-9 max(1, |R|)",
            Property::IndicatorNcut => "|NCut(S) - R(x_S)/2| <= 1e-9",
            Property::ConductanceBound => "conductance(S) <= NCut(S) + 1e-12",
            Property::Cheeger => "Phi^2/2 - 1e-9 <= lambda2 <= 2 Phi + 1e-9",
            Property::Relaxation => "lambda2/2 <= NCut* <= NCut(HyperClus-G)",
            Property::SolverAgreement => "|lambda2(Lanczos) - lambda2(dense)| <= 1e-8",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown property {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub n_max: usize,
    pub trials: usize,
    pub seed: u64,
    /// Test hook: perturbs the named property's measured quantity so the
    /// harness can be seen to fail.
    pub fault: Option<Property>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_max: 10,
            trials: 200,
            seed: 42,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub property: Property,
    pub checks: usize,
    pub failures: usize,
    /// Largest violation margin seen (negative when every check had slack).
    pub worst_margin: f64,
    pub first_failing_seed: Option<u64>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checks > 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub trials: usize,
    pub outcomes: Vec<PropertyOutcome>,
    /// Trials whose instance could not be generated or analysed.
    pub errors: Vec<(u64, String)>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.errors.is_empty() && self.outcomes.iter().all(PropertyOutcome::passed)
    }

    pub fn outcome(&self, p: Property) -> &PropertyOutcome {
        self.outcomes.iter().find(|o| o.property == p).expect("every property is tracked")
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            let status = if o.passed() { "PASS" } else { "FAIL" };
            write!(
                f,
                "{status} {:<20} {:>6} checks  worst margin {:+.3e}  ({})",
                o.property.name(),
                o.checks,
                o.worst_margin,
                o.property.description()
            )?;
            if let Some(seed) = o.first_failing_seed {
                write!(f, "  first failing seed {seed}")?;
            }
            writeln!(f)?;
        }
        for (seed, message) in &self.errors {
            writeln!(f, "ERROR seed {seed}: {message}")?;
        }
        Ok(())
    }
}

/// Trial `t` draws its instance from seed `seed + t`, so any failure can be
/// replayed with `--trials 1 --seed <failing seed>`.
pub fn verify(config: &VerifyConfig) -> Result<VerifyReport> {
    if config.n_max < 2 || config.n_max > MAX_ORACLE_VERTICES {
        return Err(Error::TooLarge {
            n: config.n_max,
            max: MAX_ORACLE_VERTICES,
        });
    }
    let mut tally: Vec<PropertyOutcome> = Property::ALL
        .iter()
        .map(|&property| PropertyOutcome {
            property,
            checks: 0,
            failures: 0,
            worst_margin: f64::NEG_INFINITY,
            first_failing_seed: None,
        })
        .collect();
    let mut errors = Vec::new();
    for t in 0..config.trials {
        let seed = config.seed.wrapping_add(t as u64);
        let mut record = |property: Property, margin: f64| {
            let margin = if config.fault == Some(property) { margin + 1.0 } else { margin };
            let o = &mut tally[property as usize];
            o.checks += 1;
            o.worst_margin = o.worst_margin.max(margin);
            if !(margin <= 0.0) {
                o.failures += 1;
                o.first_failing_seed.get_or_insert(seed);
            }
        };
        if let Err(e) = run_trial(seed, config.n_max, &mut record) {
            errors.push((seed, e.to_string()));
        }
    }
    Ok(VerifyReport {
        trials: config.trials,
        outcomes: tally,
        errors,
    })
}

/// One random instance per seed.
pub fn trial_instance(seed: u64, n_max: usize) -> Result<EdvwHypergraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2.min(n_max).max(n_max.min(4))..=n_max);
    let n_edges = if n == 2 { rng.random_range(1..=2) } else { rng.random_range(n..=2 * n) };
    let max_size = rng.random_range(2..=n.min(5));
    random_hypergraph(n, n_edges, max_size, rng.random())
}

/// `record(property, margin)` with `margin ≤ 0` meaning the check passed.
fn run_trial(seed: u64, n_max: usize, record: &mut impl FnMut(Property, f64)) -> Result<()> {
    let h = trial_instance(seed, n_max)?;
    let n = h.n_vertices();
    let config = ClusterConfig::default();
    let model = SpectralModel::build(&h, &config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);

    record(Property::RowSum, model.p.max_row_sum_error() - 1e-12);

    for _ in 0..SUBSETS_PER_TRIAL {
        let set = random_proper_subset(&mut rng, n);
        let (out_flux, in_flux) = boundary_flux(&model.phi, &model.p, &set);
        record(Property::FluxEquality, (out_flux - in_flux).abs() - 1e-9);
        let q = ClusterQuality::evaluate(&model.phi, &model.p, &set)?;
        record(Property::ConductanceBound, q.conductance - q.ncut - 1e-12);
        check_indicator(&model, &set, q.ncut, record)?;

        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let r = rayleigh_quotient(&x, &model.phi, &model.p)?;
        let via_l = 2.0 * model.laplacian.quadratic_form(&x) / pi_norm_sq(&x, &model.phi);
        record(Property::RayleighLaplacian, (r - via_l).abs() - 1e-9 * r.abs().max(1.0));
    }

    let report: OracleReport = brute_force_with(&h, &config)?;
    let (phi_h, lambda) = (report.best_conductance, report.lambda2_dense);
    record(
        Property::Cheeger,
        (phi_h * phi_h / 2.0 - BOUND_EPS - lambda).max(lambda - 2.0 * phi_h - BOUND_EPS),
    );
    record(
        Property::Relaxation,
        (lambda / 2.0 - BOUND_EPS - report.best_ncut).max(report.best_ncut - report.hyperclus_ncut - BOUND_EPS),
    );
    check_indicator(&model, &report.best_ncut_set, report.best_ncut, record)?;
    check_indicator(&model, &report.hyperclus_set, report.hyperclus_ncut, record)?;
    let q = ClusterQuality::evaluate(&model.phi, &model.p, &report.hyperclus_set)?;
    record(Property::ConductanceBound, q.conductance - q.ncut - 1e-12);

    let krylov = second_eigenpair(&model.sym, &config.solver.krylov_only())?;
    record(Property::SolverAgreement, (krylov.value - lambda).abs() - 1e-8);
    Ok(())
}

fn check_indicator(model: &SpectralModel, set: &[usize], ncut: f64, record: &mut impl FnMut(Property, f64)) -> Result<()> {
    let x = ncut_indicator(&model.phi, set)?;
    let r = rayleigh_quotient(&x, &model.phi, &model.p)?;
    record(Property::IndicatorNcut, (ncut - r / 2.0).abs() - 1e-9);
    Ok(())
}

/// Nonempty proper subset, each vertex in with probability 1/2.
fn random_proper_subset(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    loop {
        let set: Vec<usize> = (0..n).filter(|_| rng.random::<bool>()).collect();
        if !set.is_empty() && set.len() < n {
            return set;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let report = verify(&VerifyConfig {
            n_max: 8,
            trials: 20,
            seed: 1,
            fault: None,
        })
        .unwrap();
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn two_vertex_suite() {
        let config = VerifyConfig {
            n_max: 2,
            trials: 1,
            seed: 0,
            fault: None,
        };
        assert_eq!(trial_instance(0, 2).unwrap().n_vertices(), 2);
        assert!(verify(&config).unwrap().all_passed());
    }

    #[test]
    fn injected_fault_is_reported() {
        let report = verify(&VerifyConfig {
            n_max: 5,
            trials: 3,
            seed: 9,
            fault: Some(Property::Cheeger),
        })
        .unwrap();
        assert!(!report.all_passed());
        let cheeger = report.outcome(Property::Cheeger);
        assert_eq!(cheeger.failures, 3);
        assert_eq!(cheeger.first_failing_seed, Some(9));
        assert!(report.outcome(Property::RowSum).passed());
    }

    #[test]
    fn property_names_parse() {
        for p in Property::ALL {
            assert_eq!(p.name().parse::<Property>().unwrap(), p);
        }
        assert!("nope".parse::<Property>().is_err());
    }
}
