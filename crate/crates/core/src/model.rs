//! Ground truth: item sets, the environment, exact metrics and feedback.

use alloc::vec::Vec;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::ratio::Ratio;

/// A subset of the universe `{0, .., universe_size - 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ItemSet {
    bits: Bits,
    cardinality: usize,
}

impl ItemSet {
    pub fn empty(universe_size: usize) -> ItemSet {
        ItemSet {
            bits: Bits::zeros(universe_size),
            cardinality: 0,
        }
    }

    pub fn full(universe_size: usize) -> ItemSet {
        ItemSet {
            bits: Bits::ones(universe_size),
            cardinality: universe_size,
        }
    }

    pub fn from_items<I>(universe_size: usize, items: I) -> Result<ItemSet>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut s = ItemSet::empty(universe_size);
        for item in items {
            s.insert(item)?;
        }
        Ok(s)
    }

    /// Items `lo..hi`.
    pub fn range(universe_size: usize, lo: usize, hi: usize) -> Result<ItemSet> {
        ItemSet::from_items(universe_size, lo..hi)
    }

    pub(crate) fn from_bits(bits: Bits) -> ItemSet {
        let cardinality = bits.count_ones();
        ItemSet { bits, cardinality }
    }

    pub(crate) fn bits(&self) -> &Bits {
        &self.bits
    }

    #[inline]
    pub fn universe_size(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cardinality
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cardinality == 0
    }

    #[inline]
    pub fn contains(&self, item: usize) -> bool {
        item < self.universe_size() && self.bits.get(item)
    }

    /// Returns whether the item was newly added.
    pub fn insert(&mut self, item: usize) -> Result<bool> {
        self.check_item(item)?;
        if self.bits.get(item) {
            return Ok(false);
        }
        self.bits.set(item);
        self.cardinality += 1;
        Ok(true)
    }

    pub fn remove(&mut self, item: usize) -> Result<bool> {
        self.check_item(item)?;
        if !self.bits.get(item) {
            return Ok(false);
        }
        self.bits.clear(item);
        self.cardinality -= 1;
        Ok(true)
    }

    fn check_item(&self, item: usize) -> Result<()> {
        if item >= self.universe_size() {
            return Err(Error::ItemOutOfRange {
                item,
                universe: self.universe_size(),
            });
        }
        Ok(())
    }

    fn check_universe(&self, other: &ItemSet) -> Result<()> {
        if self.universe_size() != other.universe_size() {
            return Err(Error::UniverseMismatch {
                expected: self.universe_size(),
                found: other.universe_size(),
            });
        }
        Ok(())
    }

    pub fn intersection(&self, other: &ItemSet) -> Result<ItemSet> {
        self.check_universe(other)?;
        let mut bits = self.bits.clone();
        bits.and_assign(&other.bits);
        Ok(ItemSet::from_bits(bits))
    }

    pub fn union(&self, other: &ItemSet) -> Result<ItemSet> {
        self.check_universe(other)?;
        let mut bits = self.bits.clone();
        bits.or_assign(&other.bits);
        Ok(ItemSet::from_bits(bits))
    }

    pub fn difference(&self, other: &ItemSet) -> Result<ItemSet> {
        self.check_universe(other)?;
        let mut bits = self.bits.clone();
        bits.and_not_assign(&other.bits);
        Ok(ItemSet::from_bits(bits))
    }

    /// `|self ∩ other|` without materializing the intersection.
    pub fn intersection_len(&self, other: &ItemSet) -> Result<usize> {
        self.check_universe(other)?;
        Ok(self.bits.and_count(&other.bits))
    }

    pub fn is_subset(&self, other: &ItemSet) -> Result<bool> {
        self.check_universe(other)?;
        Ok(self.bits.is_subset(&other.bits))
    }

    /// The `k`-th smallest member.
    pub fn nth(&self, k: usize) -> Option<usize> {
        if k >= self.cardinality {
            return None;
        }
        self.bits.select(k)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// `N ∩ X`: the part of a proposal that can actually be played.
pub fn restrict(set: &ItemSet, available: &ItemSet) -> Result<ItemSet> {
    set.intersection(available)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum FeedbackMode {
    /// Both a recall and a precision event every round.
    #[default]
    Simplified,
    /// A fair coin picks one feedback type per round.
    Original,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeedbackType {
    Recall,
    Precision,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeedbackKind {
    /// A uniform target item `u` and whether the proposal contained it.
    Recall { item: usize, hit: bool },
    /// A uniform item `v` of the played set and whether it is a target item.
    Precision { item: usize, label: bool },
    /// The set to sample from was empty; reward follows the `p = r = 1`
    /// convention and no item is revealed.
    EmptyConvention { which: FeedbackType },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackEvent {
    pub round: usize,
    pub kind: FeedbackKind,
    pub reward: bool,
}

impl FeedbackEvent {
    pub fn feedback_type(&self) -> FeedbackType {
        match self.kind {
            FeedbackKind::Recall { .. } => FeedbackType::Recall,
            FeedbackKind::Precision { .. } => FeedbackType::Precision,
            FeedbackKind::EmptyConvention { which } => which,
        }
    }

    pub fn recall_item(&self) -> Option<usize> {
        match self.kind {
            FeedbackKind::Recall { item, .. } => Some(item),
            _ => None,
        }
    }

    pub fn precision_item(&self) -> Option<(usize, bool)> {
        match self.kind {
            FeedbackKind::Precision { item, label } => Some((item, label)),
            _ => None,
        }
    }
}

/// Mean reward of the events of one round (1 for an event-free round).
pub fn realized_reward(events: &[FeedbackEvent]) -> f64 {
    if events.is_empty() {
        return 1.0;
    }
    events.iter().filter(|e| e.reward).count() as f64 / events.len() as f64
}

/// Counts that determine every metric of a played set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetCounts {
    /// `|N ∩ X ∩ target|`
    pub overlap: usize,
    /// `|N ∩ X|`
    pub size: usize,
    /// `|target|`
    pub target: usize,
}

impl SetCounts {
    pub fn recall(&self) -> Ratio {
        if self.target == 0 {
            Ratio::ONE
        } else {
            Ratio::new(self.overlap as u64, self.target as u64)
        }
    }

    pub fn precision(&self) -> Ratio {
        if self.size == 0 {
            Ratio::ONE
        } else {
            Ratio::new(self.overlap as u64, self.size as u64)
        }
    }

    pub fn reward(&self) -> Ratio {
        self.recall().midpoint(self.precision())
    }
}

/// The hidden ground truth of one learning instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Environment {
    available: ItemSet,
    target: ItemSet,
    target_items: Vec<usize>,
    mode: FeedbackMode,
}

impl Environment {
    pub fn new(available: ItemSet, target: ItemSet, mode: FeedbackMode) -> Result<Environment> {
        if !target.is_subset(&available)? {
            return Err(Error::Config("target is not a subset of the available set".into()));
        }
        let target_items = target.to_vec();
        Ok(Environment {
            available,
            target,
            target_items,
            mode,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.available.universe_size()
    }

    pub fn available(&self) -> &ItemSet {
        &self.available
    }

    pub fn target(&self) -> &ItemSet {
        &self.target
    }

    pub fn mode(&self) -> FeedbackMode {
        self.mode
    }

    pub fn with_mode(mut self, mode: FeedbackMode) -> Environment {
        self.mode = mode;
        self
    }

    pub fn counts(&self, set: &ItemSet) -> Result<SetCounts> {
        self.available.check_universe(set)?;
        let overlap = set.intersection_len(&self.target)?;
        let size = set.intersection_len(&self.available)?;
        Ok(SetCounts {
            overlap,
            size,
            target: self.target.len(),
        })
    }

    /// Counts of a set already known to lie inside the available set.
    pub(crate) fn counts_restricted(&self, set: &ItemSet) -> SetCounts {
        SetCounts {
            overlap: set.bits().and_count(self.target.bits()),
            size: set.len(),
            target: self.target.len(),
        }
    }

    pub fn recall(&self, set: &ItemSet) -> Result<Ratio> {
        Ok(self.counts(set)?.recall())
    }

    pub fn precision(&self, set: &ItemSet) -> Result<Ratio> {
        Ok(self.counts(set)?.precision())
    }

    pub fn reward(&self, set: &ItemSet) -> Result<Ratio> {
        Ok(self.counts(set)?.reward())
    }

    pub fn sample_recall_feedback<R: Rng + ?Sized>(
        &self,
        round: usize,
        played: &ItemSet,
        rng: &mut R,
    ) -> FeedbackEvent {
        if self.target_items.is_empty() {
            return FeedbackEvent {
                round,
                kind: FeedbackKind::EmptyConvention {
                    which: FeedbackType::Recall,
                },
                reward: true,
            };
        }
        let item = self.target_items[rng.gen_range(0..self.target_items.len())];
        // target ⊆ X, so membership in N equals membership in N ∩ X.
        let hit = played.contains(item);
        FeedbackEvent {
            round,
            kind: FeedbackKind::Recall { item, hit },
            reward: hit,
        }
    }

    pub fn sample_precision_feedback<R: Rng + ?Sized>(
        &self,
        round: usize,
        played: &ItemSet,
        rng: &mut R,
    ) -> FeedbackEvent {
        let size = played.bits().and_count(self.available.bits());
        if size == 0 {
            return FeedbackEvent {
                round,
                kind: FeedbackKind::EmptyConvention {
                    which: FeedbackType::Precision,
                },
                reward: true,
            };
        }
        let k = rng.gen_range(0..size);
        let item = if size == played.len() {
            played.nth(k)
        } else {
            self.available_nth(played, k)
        }
        .expect("k below |N ∩ X|");
        let label = self.target.contains(item);
        FeedbackEvent {
            round,
            kind: FeedbackKind::Precision { item, label },
            reward: label,
        }
    }

    fn available_nth(&self, played: &ItemSet, k: usize) -> Option<usize> {
        played.iter().filter(|&i| self.available.contains(i)).nth(k)
    }

    /// One round of the protocol for the played set.
    ///
    /// Simplified mode returns a recall event followed by a precision event;
    /// original mode flips a fair coin and returns a single event.
    pub fn step<R: Rng + ?Sized>(
        &self,
        round: usize,
        played: &ItemSet,
        rng: &mut R,
    ) -> Result<Vec<FeedbackEvent>> {
        self.available.check_universe(played)?;
        Ok(match self.mode {
            FeedbackMode::Simplified => alloc::vec![
                self.sample_recall_feedback(round, played, rng),
                self.sample_precision_feedback(round, played, rng),
            ],
            FeedbackMode::Original => {
                if rng.gen_bool(0.5) {
                    alloc::vec![self.sample_recall_feedback(round, played, rng)]
                } else {
                    alloc::vec![self.sample_precision_feedback(round, played, rng)]
                }
            }
        })
    }

    /// `g_star · T − Σ g(N_t)`; negative when the plays beat the benchmark.
    pub fn pseudo_regret(&self, chosen: &[ItemSet], g_star: Ratio) -> Result<f64> {
        let mut total = 0.0;
        for set in chosen {
            total += g_star.to_f64() - self.reward(set)?.to_f64();
        }
        Ok(total)
    }
}
