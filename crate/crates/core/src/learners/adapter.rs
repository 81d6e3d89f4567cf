use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Learner, Play};
use crate::model::{FeedbackEvent, FeedbackType};

/// Block length `⌈log2(2T/δ)⌉`: a block that long sees both feedback kinds
/// in every block with probability at least `1 − δ` over `T` blocks.
pub fn adapter_block_len(horizon: usize, delta: f64) -> usize {
    let k = libm::ceil(libm::log2(2.0 * horizon as f64 / delta));
    (k as usize).max(1)
}

/// Runs a learner written for simplified feedback under original feedback.
///
/// Each proposal of the inner learner is repeated until a recall and a
/// precision event have both arrived or the block length is reached. The
/// first event of each kind is then handed to the inner learner as one
/// logical round.
pub struct FeedbackAdapter {
    inner: Box<dyn Learner>,
    name: String,
    block_len: usize,
    current: Option<Play>,
    in_block: usize,
    recall: Option<FeedbackEvent>,
    precision: Option<FeedbackEvent>,
    logical_round: usize,
}

impl FeedbackAdapter {
    pub fn new(inner: Box<dyn Learner>, block_len: usize) -> FeedbackAdapter {
        FeedbackAdapter {
            name: format!("adapter:{}", inner.name()),
            inner,
            block_len: block_len.max(1),
            current: None,
            in_block: 0,
            recall: None,
            precision: None,
            logical_round: 0,
        }
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// Blocks completed so far.
    pub fn logical_rounds(&self) -> usize {
        self.logical_round
    }

    pub fn inner(&self) -> &dyn Learner {
        &*self.inner
    }

    fn flush(&mut self) {
        let round = self.logical_round + 1;
        let events: Vec<FeedbackEvent> = [self.recall.take(), self.precision.take()]
            .into_iter()
            .flatten()
            .map(|mut e| {
                e.round = round;
                e
            })
            .collect();
        self.inner.observe(&events);
        self.logical_round = round;
        self.current = None;
        self.in_block = 0;
    }
}

impl Learner for FeedbackAdapter {
    fn name(&self) -> &str {
        &self.name
    }

    fn propose(&mut self, _round: usize) -> Play {
        if self.current.is_none() {
            self.current = Some(self.inner.propose(self.logical_round + 1));
        }
        self.in_block += 1;
        self.current.clone().expect("proposal set above")
    }

    fn observe(&mut self, events: &[FeedbackEvent]) {
        for e in events {
            let slot = match e.feedback_type() {
                FeedbackType::Recall => &mut self.recall,
                FeedbackType::Precision => &mut self.precision,
            };
            if slot.is_none() {
                *slot = Some(*e);
            }
        }
        if (self.recall.is_some() && self.precision.is_some()) || self.in_block >= self.block_len {
            self.flush();
        }
    }
}
