//! Reproducible experiments built on the simulation and the exact laws.
//!
//! Each experiment returns a typed result that can be turned into an
//! [`ExperimentReport`], the common JSON/CSV output format.

mod convergence;
mod domination;
mod identity;
mod limits;
mod report;

pub use convergence::{
    convergence_experiment, fit_power_law, upper_bound_check, ConvergenceOptions, ConvergenceRow,
    ConvergenceTable, PowerLawFit, DEFAULT_BURN_IN, GENERAL_SET_MAX_STEPS,
};
pub use domination::{domination_check, DominationReport, DominationRow};
pub use identity::{identity_check, identity_for_axis, random_identity_triples, IdentityReport, IdentityRow};
pub use limits::{gamma_limit_check, hemisphere_limit_check, HemisphereLimitReport, KsReport};
pub use report::{ExperimentReport, Verdict, SCHEMA_VERSION};

/// Width of every statistical acceptance band, in standard errors.
pub const SIGMA_BAND: f64 = 4.0;
