//! Trials run in parallel on a rayon pool; each trial owns its RNG streams,
//! so results do not depend on scheduling.

use std::sync::OnceLock;

use rayon::prelude::*;

use prset_core::harness::{prepare_scenario, run_trial, run_trial_summary, RunConfig, RunRecord, Scenario, TrialSummary};
use prset_core::learners::LearnerSpec;

use crate::{LabError, LabResult};

/// Caps the number of worker threads; `0` or unset means one per core.
pub const THREADS_ENV: &str = "PRSET_THREADS";

pub fn thread_count() -> LabResult<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) if v.trim().is_empty() => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| LabError::config(format!("{THREADS_ENV}: `{v}` is not a thread count"))),
    }
}

fn pool() -> LabResult<&'static rayon::ThreadPool> {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    if let Some(p) = POOL.get() {
        return Ok(p);
    }
    let p = rayon::ThreadPoolBuilder::new().num_threads(thread_count()?).build()?;
    Ok(POOL.get_or_init(|| p))
}

/// `f(0), .., f(n-1)` in parallel, in index order.
pub fn map_trials<T, E, F>(n: usize, f: F) -> LabResult<Vec<T>>
where
    T: Send,
    E: Into<LabError> + Send,
    F: Fn(usize) -> Result<T, E> + Sync + Send,
{
    pool()?.install(|| (0..n).into_par_iter().map(|i| f(i).map_err(Into::into)).collect())
}

pub fn run_records(cfg: &RunConfig) -> LabResult<Vec<RunRecord>> {
    cfg.validate()?;
    let scenario = prepare_scenario(&cfg.scenario, &cfg.learner)?;
    map_trials(cfg.trials, |i| run_trial(&scenario, &cfg.learner, cfg.horizon, cfg.master_seed, i))
}

pub fn run_summaries(
    scenario: &Scenario,
    spec: &LearnerSpec,
    horizon: usize,
    trials: usize,
    master_seed: u64,
    keep_curve: bool,
) -> LabResult<Vec<TrialSummary>> {
    let scenario = prepare_scenario(scenario, spec)?;
    map_trials(trials, |i| run_trial_summary(&scenario, spec, horizon, master_seed, i, keep_curve))
}
