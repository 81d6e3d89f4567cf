use alloc::sync::Arc;

use super::{Learner, Play, VersionSpace};
use crate::hypothesis::ClassView;
use crate::model::FeedbackEvent;

/// Which end of the size order a consistent learner picks from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizePreference {
    Smallest,
    Largest,
}

/// Plays a hypothesis consistent with every recall item seen, smallest (or
/// largest) `|N ∩ X|` first, ties to the lowest index. Precision feedback is
/// ignored. When no hypothesis is consistent it falls back to index 0.
#[derive(Clone, Debug)]
pub struct ConsistentLearner {
    view: Arc<ClassView>,
    preference: SizePreference,
    space: VersionSpace,
    cursor: usize,
}

impl ConsistentLearner {
    pub fn new(view: Arc<ClassView>, preference: SizePreference) -> ConsistentLearner {
        ConsistentLearner {
            space: VersionSpace::full(view.len()),
            view,
            preference,
            cursor: 0,
        }
    }

    pub fn version_space(&self) -> &VersionSpace {
        &self.space
    }

    /// Whether the fallback branch is active.
    pub fn exhausted(&self) -> bool {
        self.space.is_empty()
    }

    fn order(&self) -> &[u32] {
        match self.preference {
            SizePreference::Smallest => self.view.by_size_asc(),
            SizePreference::Largest => self.view.by_size_desc(),
        }
    }

    pub fn current(&mut self) -> usize {
        if self.space.is_empty() {
            return 0;
        }
        // The version space only shrinks, so the first alive position in a
        // fixed order never moves backwards.
        loop {
            let i = self.order()[self.cursor] as usize;
            if self.space.is_alive(i) {
                return i;
            }
            self.cursor += 1;
        }
    }
}

impl Learner for ConsistentLearner {
    fn name(&self) -> &str {
        match self.preference {
            SizePreference::Smallest => "min-consistent",
            SizePreference::Largest => "max-consistent",
        }
    }

    fn propose(&mut self, _round: usize) -> Play {
        Play::Hypothesis(self.current())
    }

    fn observe(&mut self, events: &[FeedbackEvent]) {
        for u in events.iter().filter_map(FeedbackEvent::recall_item) {
            if !self.space.is_empty() {
                self.space.restrict_to(&self.view, u, true);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypothesis::star_class;
    use crate::model::{FeedbackKind, ItemSet};

    fn recall(item: usize) -> FeedbackEvent {
        FeedbackEvent {
            round: 1,
            kind: FeedbackKind::Recall { item, hit: true },
            reward: true,
        }
    }

    #[test]
    fn star_minimal_and_maximal() {
        let view = Arc::new(ClassView::new(Arc::new(star_class(3).unwrap()), ItemSet::full(4)).unwrap());
        let mut min = ConsistentLearner::new(view.clone(), SizePreference::Smallest);
        let mut max = ConsistentLearner::new(view, SizePreference::Largest);
        assert_eq!(min.propose(1), Play::Hypothesis(0));
        assert_eq!(max.propose(1), Play::Hypothesis(1));
        min.observe(&[recall(0)]);
        max.observe(&[recall(0)]);
        assert_eq!(min.propose(2), Play::Hypothesis(0));
        assert_eq!(max.propose(2), Play::Hypothesis(1));
        max.observe(&[recall(3)]);
        assert_eq!(max.propose(3), Play::Hypothesis(3));
    }

    #[test]
    fn inconsistent_feedback_falls_back_to_index_zero() {
        let view = Arc::new(ClassView::new(Arc::new(star_class(3).unwrap()), ItemSet::full(4)).unwrap());
        let mut learner = ConsistentLearner::new(view, SizePreference::Largest);
        learner.observe(&[recall(1), recall(2)]);
        assert!(learner.exhausted());
        assert_eq!(learner.propose(2), Play::Hypothesis(0));
    }
}
