//! Experiment harness around the `maedm` solver: repeated runs over
//! instance files, aggregate statistics and result persistence.

pub mod harness;
pub mod stats;

pub use harness::{run_experiment, ExperimentOutcome, ExperimentSpec, RunRecord};
pub use stats::Aggregate;
