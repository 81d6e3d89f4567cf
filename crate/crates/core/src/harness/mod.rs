//! Scenarios, the protocol loop, optimum computation and aggregation.

mod aggregate;
mod optimal;
mod run;
mod scenario;

pub use aggregate::{aggregate, aggregate_records, mean_band, Curve, Z95};
pub use optimal::{compute_optimal, compute_optimal_planted, OptimalityReport};
pub use run::{
    prepare_scenario, prepare_trial, run_experiment, run_trial, run_trial_summary, simulate, PlayRecord,
    PreparedTrial, RoundOutcome, RoundRecord, RunConfig, RunRecord, TrialSummary,
};
pub use scenario::{
    bandit_allocation, lower_bound_epsilon, snap_epsilon, IndexDistribution, Instance, Scenario, TargetGenerator,
    World, LBVC_MAX_D,
};
