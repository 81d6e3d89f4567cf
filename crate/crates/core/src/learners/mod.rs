//! Learning rules behind one interface.
//!
//! Each round the harness asks the learner for a [`Play`], samples feedback
//! for it and hands the round's events back through [`Learner::observe`].
//! In simplified mode a round carries a recall event followed by a precision
//! event; in original mode it carries one of the two.

mod adapter;
mod april;
mod consistent;
mod exp3;
mod halving;
mod singleton;
mod spec;
mod trivial;

pub use adapter::{adapter_block_len, FeedbackAdapter};
pub use april::{alpha_star, stage_budgets, April, AprilAuto, AprilParams, Phase, ProbeOutcome};
pub use consistent::{ConsistentLearner, SizePreference};
pub use exp3::Exp3;
pub use halving::{HalvingReduction, OnlineRule};
pub use singleton::SingletonProbe;
pub use spec::{LearnerKind, LearnerSpec};
pub use trivial::{Trivial, TrivialKind};

use alloc::boxed::Box;
use alloc::sync::Arc;

use crate::bits::Bits;
use crate::hypothesis::ClassView;
use crate::model::{FeedbackEvent, FeedbackMode, ItemSet};
use crate::rng::RngStream;

/// What a learner plays in one round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Play {
    /// The `i`-th hypothesis of the class (restricted to `X`).
    Hypothesis(usize),
    Empty,
    /// The whole available set `X`.
    Available,
    /// An explicit set outside the class.
    Set(Arc<ItemSet>),
}

pub trait Learner: Send {
    fn name(&self) -> &str;

    /// The set to play in `round` (1-based).
    fn propose(&mut self, round: usize) -> Play;

    /// All feedback events of the round just played.
    fn observe(&mut self, events: &[FeedbackEvent]);
}

impl<L: Learner + ?Sized> Learner for Box<L> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn propose(&mut self, round: usize) -> Play {
        (**self).propose(round)
    }

    fn observe(&mut self, events: &[FeedbackEvent]) {
        (**self).observe(events)
    }
}

/// Everything a learner may know about its instance before round 1.
#[derive(Clone, Debug)]
pub struct LearnerContext {
    pub view: Arc<ClassView>,
    pub horizon: usize,
    pub mode: FeedbackMode,
    /// VC dimension of the class over `X`, when known from the construction.
    pub vc_dimension: Option<usize>,
    pub rng: RngStream,
}

/// Hypotheses consistent with the feedback fed so far. Bits are only ever
/// cleared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VersionSpace {
    alive: Bits,
    count: usize,
}

impl VersionSpace {
    pub fn full(class_size: usize) -> VersionSpace {
        VersionSpace {
            alive: Bits::ones(class_size),
            count: class_size,
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn is_alive(&self, index: usize) -> bool {
        self.alive.get(index)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.alive.iter_ones()
    }

    pub(crate) fn bits(&self) -> &Bits {
        &self.alive
    }

    /// The surviving set after requiring `h(item) = label`, without
    /// committing it.
    fn filtered(&self, view: &ClassView, item: usize, label: bool) -> Bits {
        let mut next = self.alive.clone();
        match view.column(item) {
            Some(col) if label => next.and_assign(col),
            Some(col) => next.and_not_assign(col),
            None => {
                for i in self.alive.iter_ones() {
                    if view.contains(i, item) != label {
                        next.clear(i);
                    }
                }
            }
        }
        next
    }

    /// Keeps hypotheses with `h(item) = label`; returns how many were removed.
    pub fn restrict_to(&mut self, view: &ClassView, item: usize, label: bool) -> usize {
        let next = self.filtered(view, item, label);
        self.commit(next)
    }

    /// Like [`Self::restrict_to`], but leaves the space untouched (returning
    /// `None`) when no hypothesis would survive.
    pub fn try_restrict_to(&mut self, view: &ClassView, item: usize, label: bool) -> Option<usize> {
        let next = self.filtered(view, item, label);
        if next.count_ones() == 0 {
            return None;
        }
        Some(self.commit(next))
    }

    fn commit(&mut self, next: Bits) -> usize {
        let count = next.count_ones();
        let removed = self.count - count;
        self.alive = next;
        self.count = count;
        removed
    }
}
