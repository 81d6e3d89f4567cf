use serde::{Deserialize, Serialize};

use crate::hypothesis::ClassView;
use crate::model::{Environment, ItemSet};
use crate::ratio::Ratio;

/// The best hypothesis of an instance and the two trivial benchmarks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimalityReport {
    pub best_index: usize,
    pub g_star: Ratio,
    pub g_empty: Ratio,
    pub g_available: Ratio,
}

impl OptimalityReport {
    /// `2 g(N⋆) − 1`, the margin of the best hypothesis over the trivial sets.
    pub fn alpha(&self) -> f64 {
        2.0 * self.g_star.to_f64() - 1.0
    }
}

fn trivial_rewards(view: &ClassView, env: &Environment) -> (Ratio, Ratio) {
    let empty = ItemSet::empty(view.universe_size());
    (
        env.counts_restricted(&empty).reward(),
        env.counts_restricted(view.available()).reward(),
    )
}

/// Exhaustive search over the class; ties go to the lowest index.
pub fn compute_optimal(view: &ClassView, env: &Environment) -> OptimalityReport {
    let mut best_index = 0;
    let mut g_star = env.counts_restricted(view.hypothesis(0)).reward();
    for i in 1..view.len() {
        let g = env.counts_restricted(view.hypothesis(i)).reward();
        if g > g_star {
            best_index = i;
            g_star = g;
        }
    }
    let (g_empty, g_available) = trivial_rewards(view, env);
    OptimalityReport { best_index, g_star, g_empty, g_available }
}

/// Like [`compute_optimal`] when hypothesis `planted` is known to equal the
/// target on `X` and no lower index does: its reward is 1, the maximum.
/// Falls back to the exhaustive search if the claim does not hold.
pub fn compute_optimal_planted(view: &ClassView, env: &Environment, planted: usize) -> OptimalityReport {
    if planted < view.len() && view.hypothesis(planted) == env.target() {
        let (g_empty, g_available) = trivial_rewards(view, env);
        return OptimalityReport { best_index: planted, g_star: Ratio::ONE, g_empty, g_available };
    }
    compute_optimal(view, env)
}
