use alloc::sync::Arc;
use alloc::vec::Vec;

use super::{Learner, Play};
use crate::model::{FeedbackEvent, ItemSet};

/// Probes the items of `X` one at a time as singletons. The precision label
/// of `{x}` is exactly `x ∈ target`, so after `|X|` answered probes the
/// target is known and played forever.
#[derive(Clone, Debug)]
pub struct SingletonProbe {
    items: Vec<usize>,
    next: usize,
    learned: ItemSet,
    probe: Option<Arc<ItemSet>>,
    settled: Option<Arc<ItemSet>>,
}

impl SingletonProbe {
    pub fn new(available: &ItemSet) -> SingletonProbe {
        SingletonProbe {
            items: available.to_vec(),
            next: 0,
            learned: ItemSet::empty(available.universe_size()),
            probe: None,
            settled: None,
        }
    }

    /// Probes answered so far.
    pub fn resolved(&self) -> usize {
        self.next
    }

    pub fn learned(&self) -> &ItemSet {
        &self.learned
    }

    pub fn is_settled(&self) -> bool {
        self.next == self.items.len()
    }
}

impl Learner for SingletonProbe {
    fn name(&self) -> &str {
        "singleton-probe"
    }

    fn propose(&mut self, _round: usize) -> Play {
        if self.is_settled() {
            let set = self
                .settled
                .get_or_insert_with(|| Arc::new(self.learned.clone()));
            return Play::Set(set.clone());
        }
        let x = self.items[self.next];
        let universe = self.learned.universe_size();
        let set = self.probe.get_or_insert_with(|| {
            Arc::new(ItemSet::from_items(universe, [x]).expect("probe item in universe"))
        });
        Play::Set(set.clone())
    }

    fn observe(&mut self, events: &[FeedbackEvent]) {
        if self.is_settled() {
            return;
        }
        let x = self.items[self.next];
        let answer = events
            .iter()
            .filter_map(FeedbackEvent::precision_item)
            .find(|&(item, _)| item == x);
        if let Some((_, label)) = answer {
            if label {
                self.learned.insert(x).expect("probe item in universe");
            }
            self.next += 1;
            self.probe = None;
        }
    }
}
