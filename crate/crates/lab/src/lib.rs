//! Experiment driver for `prset-core`: scenario files and presets, the
//! parallel trial runner, CSV/JSON/SVG output and the `prset` command line.

pub mod cli;
pub mod emit;
mod error;
pub mod parallel;
pub mod scenario_file;
pub mod verify;

pub use error::{LabError, LabResult};
