use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use super::{Learner, Play};
use crate::model::{realized_reward, FeedbackEvent};
use crate::rng::Rng;

/// Weights below this total are rescaled to keep sampling well conditioned.
const RESCALE_BELOW: f64 = 1e-200;

/// Exponential weights over hypothesis indices with importance-weighted
/// loss estimates `(1 − g_t) / p_{i_t}`.
#[derive(Clone, Debug)]
pub struct Exp3 {
    k: usize,
    eta: f64,
    /// Sum tree: leaves at `leaves + i`, node `j` holds the sum of its children.
    tree: Vec<f64>,
    leaves: usize,
    rng: Rng,
    last: Option<(usize, f64)>,
}

impl Exp3 {
    pub fn new(k: usize, horizon: usize, rng: Rng) -> Exp3 {
        assert!(k >= 1, "EXP3 needs at least one arm");
        let leaves = k.next_power_of_two();
        let mut tree = vec![0.0; 2 * leaves];
        tree[leaves..leaves + k].iter_mut().for_each(|w| *w = 1.0);
        for j in (1..leaves).rev() {
            tree[j] = tree[2 * j] + tree[2 * j + 1];
        }
        let eta = if k == 1 {
            0.0
        } else {
            libm::sqrt(2.0 * libm::log(k as f64) / (horizon.max(1) as f64 * k as f64))
        };
        Exp3 {
            k,
            eta,
            tree,
            leaves,
            rng,
            last: None,
        }
    }

    pub fn learning_rate(&self) -> f64 {
        self.eta
    }

    pub fn probability(&self, arm: usize) -> f64 {
        self.tree[self.leaves + arm] / self.tree[1]
    }

    fn set_weight(&mut self, arm: usize, w: f64) {
        let mut j = self.leaves + arm;
        self.tree[j] = w;
        while j > 1 {
            j /= 2;
            self.tree[j] = self.tree[2 * j] + self.tree[2 * j + 1];
        }
    }

    fn rescale(&mut self) {
        let max = self.tree[self.leaves..self.leaves + self.k]
            .iter()
            .copied()
            .fold(0.0, f64::max);
        if max <= 0.0 {
            return;
        }
        for w in &mut self.tree[self.leaves..] {
            *w /= max;
        }
        for j in (1..self.leaves).rev() {
            self.tree[j] = self.tree[2 * j] + self.tree[2 * j + 1];
        }
    }

    fn sample(&mut self) -> usize {
        let mut u = self.rng.gen::<f64>() * self.tree[1];
        let mut j = 1;
        while j < self.leaves {
            let left = self.tree[2 * j];
            if u < left || self.tree[2 * j + 1] <= 0.0 {
                j *= 2;
            } else {
                u -= left;
                j = 2 * j + 1;
            }
        }
        (j - self.leaves).min(self.k - 1)
    }
}

impl Learner for Exp3 {
    fn name(&self) -> &str {
        "exp3"
    }

    fn propose(&mut self, _round: usize) -> Play {
        let arm = self.sample();
        self.last = Some((arm, self.probability(arm)));
        Play::Hypothesis(arm)
    }

    fn observe(&mut self, events: &[FeedbackEvent]) {
        let Some((arm, p)) = self.last.take() else {
            return;
        };
        if events.is_empty() {
            return;
        }
        let loss = (1.0 - realized_reward(events)) / p;
        let mut w = self.tree[self.leaves + arm] * libm::exp(-self.eta * loss);
        if w == 0.0 && self.tree[1] == self.tree[self.leaves + arm] {
            w = f64::MIN_POSITIVE;
        }
        self.set_weight(arm, w);
        if self.tree[1] < RESCALE_BELOW {
            self.rescale();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FeedbackKind;
    use crate::rng::{RngStream, LANE_LEARNER};

    fn event(reward: bool) -> FeedbackEvent {
        FeedbackEvent {
            round: 1,
            kind: FeedbackKind::Recall { item: 0, hit: reward },
            reward,
        }
    }

    #[test]
    fn starts_uniform() {
        let e = Exp3::new(5, 100, RngStream::new(1, 0).lane(LANE_LEARNER));
        for i in 0..5 {
            assert!((e.probability(i) - 0.2).abs() < 1e-15);
        }
    }

    #[test]
    fn learning_rate_formula() {
        let e = Exp3::new(4, 1000, RngStream::new(1, 0).lane(LANE_LEARNER));
        assert!((e.learning_rate() - (2.0 * 4f64.ln() / 4000.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn concentrates_on_rewarding_arm() {
        let mut e = Exp3::new(3, 5000, RngStream::new(3, 0).lane(LANE_LEARNER));
        for t in 1..=5000 {
            let Play::Hypothesis(i) = e.propose(t) else { unreachable!() };
            e.observe(&[event(i == 2)]);
        }
        assert!(e.probability(2) > 0.9);
    }

    #[test]
    fn survives_extreme_losses() {
        let mut e = Exp3::new(2, 1, RngStream::new(5, 0).lane(LANE_LEARNER));
        for t in 1..=20_000 {
            e.propose(t);
            e.observe(&[event(false)]);
        }
        let total = e.probability(0) + e.probability(1);
        assert!((total - 1.0).abs() < 1e-9);
    }
}
