//! Memetic search with explicit diversity management for the linear
//! ordering problem.
//!
//! A population of insert-locally optimal permutations is evolved with
//! binary tournaments and cycle or order-based crossover. Survivors are
//! chosen by [`replacement::bnp_select`], which refuses candidates that sit
//! too close to already chosen survivors; the distance threshold shrinks
//! linearly to zero over the run's budget, trading exploration for
//! exploitation as the run ends.

pub mod engine;
pub mod error;
pub mod instance;
pub mod local_search;
pub mod permutation;
pub mod replacement;
pub mod rng;
pub mod variation;

pub use engine::{run, run_observed, Budget, EngineConfig, Replacement, RunTelemetry, Sample};
pub use error::{Error, Result};
pub use instance::{brute_force_optimum, Instance};
pub use local_search::{insertion_delta_scan, is_insert_local_optimum, local_search, InsertMove};
pub use permutation::{dci, deviation_distance, mean_pairwise_distance, Individual, Permutation, Population};
pub use replacement::{bnp_select, DiversitySchedule};
pub use variation::{binary_tournament, cycle_crossover, order_crossover, Crossover};
