use super::{Learner, Play};
use crate::model::FeedbackEvent;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrivialKind {
    Empty,
    FullAvailable,
}

/// Plays the same improper set every round.
#[derive(Clone, Debug)]
pub struct Trivial {
    kind: TrivialKind,
}

impl Trivial {
    pub fn new(kind: TrivialKind) -> Trivial {
        Trivial { kind }
    }
}

impl Learner for Trivial {
    fn name(&self) -> &str {
        match self.kind {
            TrivialKind::Empty => "empty",
            TrivialKind::FullAvailable => "full",
        }
    }

    fn propose(&mut self, _round: usize) -> Play {
        match self.kind {
            TrivialKind::Empty => Play::Empty,
            TrivialKind::FullAvailable => Play::Available,
        }
    }

    fn observe(&mut self, _events: &[FeedbackEvent]) {}
}
