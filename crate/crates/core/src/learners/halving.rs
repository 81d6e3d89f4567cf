//! Reduction from precision/recall feedback to mistake-bounded online
//! classification. A precision event on `v` with label 0 is fed as the
//! example `(v, 0)`; otherwise the recall item `u` is fed as `(u, 1)`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{Learner, Play, VersionSpace};
use crate::bits::Bits;
use crate::error::Result;
use crate::hypothesis::{ClassView, LittlestoneOracle};
use crate::model::{FeedbackEvent, FeedbackKind, ItemSet};

/// The online classifier run over the items of `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OnlineRule {
    /// Predict 1 when a strict majority of the version space contains the item.
    Halving,
    /// Predict the label whose restricted version space has the larger
    /// Littlestone dimension (1 only on a strict win).
    Soa,
}

#[derive(Clone, Debug)]
pub struct HalvingReduction {
    view: Arc<ClassView>,
    rule: OnlineRule,
    space: VersionSpace,
    oracle: Option<LittlestoneOracle>,
    current: Option<Arc<ItemSet>>,
    mistakes: usize,
    skipped: usize,
}

impl HalvingReduction {
    /// Fails with a capacity error when SOA is requested on an instance the
    /// Littlestone oracle cannot handle.
    pub fn new(view: Arc<ClassView>, rule: OnlineRule) -> Result<HalvingReduction> {
        let oracle = match rule {
            OnlineRule::Halving => None,
            OnlineRule::Soa => Some(LittlestoneOracle::new(view.class(), view.available())?),
        };
        Ok(HalvingReduction {
            space: VersionSpace::full(view.len()),
            view,
            rule,
            oracle,
            current: None,
            mistakes: 0,
            skipped: 0,
        })
    }

    pub fn rule(&self) -> OnlineRule {
        self.rule
    }

    /// Examples fed so far on which the prediction was wrong.
    pub fn mistakes(&self) -> usize {
        self.mistakes
    }

    /// Examples that no surviving hypothesis agreed with (non-realizable
    /// input); they are counted but leave the version space untouched.
    pub fn skipped_updates(&self) -> usize {
        self.skipped
    }

    pub fn version_space(&self) -> &VersionSpace {
        &self.space
    }

    fn prediction(&mut self) -> Arc<ItemSet> {
        if let Some(set) = &self.current {
            return set.clone();
        }
        let universe = self.view.universe_size();
        let mut out = Bits::zeros(universe);
        match self.rule {
            OnlineRule::Halving => {
                let alive = self.space.bits();
                let total = self.space.count();
                for &x in self.view.items() {
                    let with = match self.view.column(x) {
                        Some(col) => alive.and_count(col),
                        None => alive.iter_ones().filter(|&i| self.view.contains(i, x)).count(),
                    };
                    if 2 * with > total {
                        out.set(x);
                    }
                }
            }
            OnlineRule::Soa => {
                let oracle = self.oracle.as_mut().expect("SOA oracle");
                let mask = self.space.bits().words().first().copied().unwrap_or(0);
                let points: Vec<usize> = oracle.points().to_vec();
                for (j, &x) in points.iter().enumerate() {
                    let pm = oracle.point_mask(j);
                    let ones = oracle.ldim(mask & pm);
                    let zeros = oracle.ldim(mask & !pm);
                    if ones > zeros {
                        out.set(x);
                    }
                }
            }
        }
        let set = Arc::new(ItemSet::from_bits(out));
        self.current = Some(set.clone());
        set
    }

    fn feed(&mut self, item: usize, label: bool) {
        let predicted = self.prediction().contains(item);
        if predicted != label {
            self.mistakes += 1;
        }
        match self.space.try_restrict_to(&self.view, item, label) {
            Some(0) => {}
            Some(_) => self.current = None,
            None => self.skipped += 1,
        }
    }
}

impl Learner for HalvingReduction {
    fn name(&self) -> &str {
        match self.rule {
            OnlineRule::Halving => "halving",
            OnlineRule::Soa => "soa",
        }
    }

    fn propose(&mut self, _round: usize) -> Play {
        Play::Set(self.prediction())
    }

    fn observe(&mut self, events: &[FeedbackEvent]) {
        let negative = events.iter().find_map(|e| match e.kind {
            FeedbackKind::Precision { item, label: false } => Some(item),
            _ => None,
        });
        if let Some(v) = negative {
            self.feed(v, false);
        } else if let Some(u) = events.iter().find_map(FeedbackEvent::recall_item) {
            self.feed(u, true);
        }
    }
}
