//! Online set learning from precision and recall feedback.
//!
//! A learner repeatedly proposes a subset of a finite universe and is shown
//! either a uniformly random item of the hidden target set (recall feedback)
//! or a uniformly random item of its own proposal together with a membership
//! label (precision feedback). The expected per-round reward of a set is the
//! mean of its recall and precision.
//!
//! This crate holds everything that does not need an operating system:
//!
//! - [`model`]: item sets, environments, exact metrics and feedback sampling.
//! - [`hypothesis`]: finite hypothesis classes, the constructions used by the
//!   lower-bound and separation arguments, and exhaustive VC / Littlestone
//!   dimension oracles.
//! - [`estimation`]: empirical recall and the target-size estimator used by
//!   the agnostic learner.
//! - [`learners`]: every learning rule behind one [`learners::Learner`] trait.
//! - [`harness`]: scenario generators, the optimality report, the
//!   sequential experiment loop and curve aggregation.
//!
//! The crate is `no_std` and only requires `alloc`. File formats, the
//! parallel runner and the command line live in the `prset` crate.

#![no_std]

extern crate alloc;

mod bits;
pub mod error;
pub mod estimation;
pub mod harness;
pub mod hypothesis;
pub mod learners;
pub mod model;
pub mod ratio;
pub mod rng;

pub use error::{Error, Result};
pub use hypothesis::{ClassView, HypothesisClass};
pub use model::{Environment, FeedbackEvent, FeedbackKind, FeedbackMode, ItemSet};
pub use ratio::Ratio;
pub use rng::RngStream;
