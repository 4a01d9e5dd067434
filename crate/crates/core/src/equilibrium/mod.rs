//! Equilibrium verification and solvers.

mod assumptions;
mod enumerate;
mod iterate;
mod robustness;
mod statics;
mod tarski;
mod theorems;
mod verify;

pub use assumptions::{
    check_increasing_differences, check_monotone_assumptions, check_parametric_assumptions, increasing_differences,
    AssumptionCheck, CheckStatus, IdResult, IdWitness, MonotoneReport,
};
pub use enumerate::{decode_pure, enumerate_pure_equilibria, enumerate_pure_equilibria_capped, pure_profile_count};
pub use iterate::{best_response_iteration, IterationOutcome};
pub use robustness::{perturb_priors, robustness_probe, RobustnessPoint, RobustnessReport};
pub use statics::{comparative_statics_sweep, ParametricFamily, StaticsPair, StaticsPoint, StaticsReport};
pub use tarski::{is_monotone_profile, pure_levels, tarski_iterate, Direction, TarskiResult};
pub use theorems::{random_profile, theorem_suite, StrategyRecord, TheoremReport};
pub use verify::{verify_profile, EquilibriumReport, Witness};
