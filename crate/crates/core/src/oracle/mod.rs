//! Ground truth on small instances: exhaustive NCut and conductance
//! minima, an independent dense spectrum, random hypergraphs, and the
//! seeded property suite built from them.

mod brute;
mod random;
mod verify;

pub use brute::{
    brute_force_optima, brute_force_with, dense_lambda2, dense_spectrum, dense_walk, OracleReport, BOUND_EPS,
    MAX_ORACLE_VERTICES,
};
pub use random::{random_hypergraph, MAX_RETRIES};
pub use verify::{trial_instance, verify, Property, PropertyOutcome, VerifyConfig, VerifyReport, SUBSETS_PER_TRIAL};
