//! Estimators behind the agnostic learner: empirical recall for every
//! hypothesis, and the importance-weighted target-size estimate
//!
//! ```text
//! n̂ = (1/m) Σ_t 1(y_t = 1) · |N_t ∩ X| / max(r̂(N_t), floor)
//! ```
//!
//! from which precision of any hypothesis follows as `r̂(N) · n̂ / |N ∩ X|`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypothesis::ClassView;
use crate::ratio::Ratio;

/// Per-hypothesis tallies of `1(u ∈ N)` over recall samples `u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecallEstimator {
    m: u64,
    hits: Vec<u64>,
    /// Hypotheses whose tallies are maintained; `None` means all.
    tracked: Option<Vec<u32>>,
}

impl RecallEstimator {
    pub fn new(class_size: usize) -> RecallEstimator {
        RecallEstimator {
            m: 0,
            hits: vec![0; class_size],
            tracked: None,
        }
    }

    /// Only the listed hypotheses are tallied; estimates for others stay 0.
    pub fn tracking(class_size: usize, indices: Vec<u32>) -> RecallEstimator {
        RecallEstimator {
            m: 0,
            hits: vec![0; class_size],
            tracked: Some(indices),
        }
    }

    pub fn samples(&self) -> u64 {
        self.m
    }

    pub fn hits(&self, index: usize) -> u64 {
        self.hits[index]
    }

    /// Adds one recall sample `u` (an item of the target, hence of `X`).
    pub fn update(&mut self, view: &ClassView, u: usize) {
        self.m += 1;
        match &self.tracked {
            Some(idx) => {
                for &i in idx {
                    if view.contains(i as usize, u) {
                        self.hits[i as usize] += 1;
                    }
                }
            }
            None => match view.column(u) {
                Some(col) => {
                    for i in col.iter_ones() {
                        self.hits[i] += 1;
                    }
                }
                None => {
                    for (i, h) in self.hits.iter_mut().enumerate() {
                        if view.contains(i, u) {
                            *h += 1;
                        }
                    }
                }
            },
        }
    }

    /// A recall round with an empty target: every set has recall 1 by
    /// convention, so every tally counts a hit.
    pub fn update_empty_target(&mut self) {
        self.m += 1;
        match &self.tracked {
            Some(idx) => {
                for &i in idx {
                    self.hits[i as usize] += 1;
                }
            }
            None => self.hits.iter_mut().for_each(|h| *h += 1),
        }
    }

    pub fn estimate(&self, index: usize) -> Result<f64> {
        if self.m == 0 {
            return Err(Error::NoData("recall estimate before any recall sample"));
        }
        Ok(self.hits[index] as f64 / self.m as f64)
    }

    pub fn estimate_exact(&self, index: usize) -> Result<Ratio> {
        if self.m == 0 {
            return Err(Error::NoData("recall estimate before any recall sample"));
        }
        Ok(Ratio::new(self.hits[index], self.m))
    }
}

/// One precision label from a round where hypothesis `hypothesis` was played.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionObservation {
    /// `|N_t ∩ X|`, at least 1.
    pub set_size: usize,
    pub hypothesis: usize,
    pub label: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetSizeEstimate {
    pub value: f64,
    pub m: usize,
}

/// The target-size estimator, with every recall denominator floored at
/// `floor`.
pub fn est_target_size<F>(
    r_hat: F,
    obs: &[PrecisionObservation],
    floor: f64,
) -> Result<TargetSizeEstimate>
where
    F: Fn(usize) -> f64,
{
    if obs.is_empty() {
        return Err(Error::NoData("target-size estimate without precision observations"));
    }
    if floor.is_nan() || floor <= 0.0 {
        return Err(Error::Config("target-size floor must be positive".into()));
    }
    let sum: f64 = obs
        .iter()
        .filter(|o| o.label)
        .map(|o| o.set_size as f64 / r_hat(o.hypothesis).max(floor))
        .sum();
    Ok(TargetSizeEstimate {
        value: sum / obs.len() as f64,
        m: obs.len(),
    })
}

/// `r̂ · n̂ / |N ∩ X|`, not clamped to `[0, 1]`; an empty set has precision 1.
pub fn estimate_precision(r_hat: f64, n_star: &TargetSizeEstimate, set_size: usize) -> f64 {
    if set_size == 0 {
        return 1.0;
    }
    r_hat * n_star.value / set_size as f64
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// [`estimate_precision`] in exact arithmetic. Fails with a capacity error
/// if the reduced result does not fit in 64-bit terms.
pub fn estimate_precision_exact(r_hat: Ratio, n_star: Ratio, set_size: usize) -> Result<Ratio> {
    if set_size == 0 {
        return Ok(Ratio::ONE);
    }
    let num = r_hat.numer() as u128 * n_star.numer() as u128;
    let den = r_hat.denom() as u128 * n_star.denom() as u128 * set_size as u128;
    let g = gcd128(num, den).max(1);
    let (num, den) = (num / g, den / g);
    match (u64::try_from(num), u64::try_from(den)) {
        (Ok(n), Ok(d)) => Ok(Ratio::new(n, d)),
        _ => Err(Error::Capacity {
            what: "exact precision estimate",
            limit: u64::MAX as usize,
            requested: usize::MAX,
        }),
    }
}

/// Running form of [`est_target_size`] that groups observations by
/// hypothesis, so re-evaluating under a fresh recall estimate costs one term
/// per distinct played hypothesis instead of one per observation.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TargetSizeAccumulator {
    m: usize,
    /// hypothesis → (set size, positive labels)
    positives: BTreeMap<usize, (usize, u64)>,
}

impl TargetSizeAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, obs: PrecisionObservation) {
        self.m += 1;
        let e = self.positives.entry(obs.hypothesis).or_insert((obs.set_size, 0));
        if obs.label {
            e.1 += 1;
        }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn estimate<F>(&self, r_hat: F, floor: f64) -> Result<TargetSizeEstimate>
    where
        F: Fn(usize) -> f64,
    {
        if self.m == 0 {
            return Err(Error::NoData("target-size estimate without precision observations"));
        }
        let sum: f64 = self
            .positives
            .iter()
            .filter(|(_, &(_, pos))| pos > 0)
            .map(|(&h, &(size, pos))| pos as f64 * size as f64 / r_hat(h).max(floor))
            .sum();
        Ok(TargetSizeEstimate {
            value: sum / self.m as f64,
            m: self.m,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypothesis::star_class;
    use crate::model::ItemSet;
    use alloc::sync::Arc;

    fn star_view() -> ClassView {
        ClassView::new(Arc::new(star_class(2).unwrap()), ItemSet::full(3)).unwrap()
    }

    #[test]
    fn update_recall_examples() {
        let v = star_view();
        let mut e = RecallEstimator::new(3);
        e.update(&v, 0);
        assert_eq!((e.hits(0), e.hits(1), e.hits(2)), (1, 1, 1));
        e.update(&v, 2);
        assert_eq!((e.hits(0), e.hits(1), e.hits(2)), (1, 1, 2));
        assert_eq!(e.samples(), 2);
    }

    #[test]
    fn tracked_subset_only() {
        let v = star_view();
        let mut e = RecallEstimator::tracking(3, vec![2]);
        e.update(&v, 0);
        e.update_empty_target();
        assert_eq!((e.hits(0), e.hits(2)), (0, 2));
    }

    #[test]
    fn estimate_recall_examples() {
        let v = star_view();
        let mut e = RecallEstimator::new(3);
        assert!(matches!(e.estimate(0), Err(Error::NoData(_))));
        for u in [0, 0, 1, 2] {
            e.update(&v, u);
        }
        assert_eq!(e.estimate(0).unwrap(), 0.5);
        assert_eq!(e.estimate(1).unwrap(), 0.75);
        let mut all = RecallEstimator::new(3);
        all.update(&v, 0);
        assert_eq!(all.estimate(2).unwrap(), 1.0);
        let mut z = RecallEstimator::new(3);
        z.update(&v, 2);
        assert_eq!(z.estimate(1).unwrap(), 0.0);
        assert_eq!(z.estimate_exact(2).unwrap(), Ratio::ONE);
    }

    fn obs(h: usize, size: usize, label: bool) -> PrecisionObservation {
        PrecisionObservation {
            set_size: size,
            hypothesis: h,
            label,
        }
    }

    #[test]
    fn est_target_size_examples() {
        let one = est_target_size(|_| 0.5, &[obs(0, 10, true)], 0.1).unwrap();
        assert_eq!(one.value, 20.0);
        assert_eq!(one.m, 1);
        let two = est_target_size(|_| 0.5, &[obs(0, 10, true), obs(0, 10, false)], 0.1).unwrap();
        assert_eq!(two.value, 10.0);
        // Floor replaces a zero recall estimate.
        let floored = est_target_size(|_| 0.0, &[obs(0, 10, true)], 0.25).unwrap();
        assert_eq!(floored.value, 40.0);
        assert!(matches!(
            est_target_size(|_| 0.5, &[], 0.1),
            Err(Error::NoData(_))
        ));
        assert!(est_target_size(|_| 0.5, &[obs(0, 1, true)], 0.0).is_err());
    }

    #[test]
    fn estimate_precision_examples() {
        let n = TargetSizeEstimate { value: 5.0, m: 1 };
        assert_eq!(estimate_precision(1.0, &n, 10), 0.5);
        assert_eq!(estimate_precision(0.0, &n, 10), 0.0);
        assert_eq!(estimate_precision(0.3, &n, 0), 1.0);
        // Not clamped.
        assert!(estimate_precision(1.0, &n, 2) > 1.0);
    }

    #[test]
    fn accumulator_matches_list_form() {
        let list = [
            obs(0, 10, true),
            obs(0, 10, false),
            obs(3, 4, true),
            obs(3, 4, true),
            obs(1, 7, false),
        ];
        let r = |h: usize| [0.5, 0.02, 0.0, 0.8][h];
        let direct = est_target_size(r, &list, 0.1).unwrap();
        let mut acc = TargetSizeAccumulator::new();
        list.iter().for_each(|&o| acc.push(o));
        let grouped = acc.estimate(r, 0.1).unwrap();
        assert_eq!(grouped.m, direct.m);
        assert!((grouped.value - direct.value).abs() <= 1e-12 * direct.value);
    }
}
