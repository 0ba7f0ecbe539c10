//! Monte Carlo estimation, reproduction of the published tables, and timing.
//!
//! Work is split over a fixed number of workers; worker `w` draws from
//! `RngStream::new(seed, w)` and partial sums are merged in worker order, so
//! results depend only on `(seed, reps, workers)`.

mod bench;
mod estimate;
mod statistic;
mod stats;
mod table;

pub use bench::{benchmark_methods, BenchmarkReport, BenchmarkRow};
pub use estimate::{
    estimate, estimate_acceptance, estimate_many, estimate_with_workers, simulate_lengths,
    simulate_lengths_with_budget, AcceptanceEstimate, EstimateResult,
};
pub use statistic::{distinct_lengths_statistic, Method, Statistic};
pub use stats::{chi_square_test, ks_statistic, total_variation, ChiSquareResult};
pub use table::{reproduce_table, Table, TableOptions, TableSpec, TABLE_IDS};

/// Default number of parallel workers (and RNG streams).
pub const DEFAULT_WORKERS: usize = 8;
/// Default Monte Carlo repetitions.
pub const DEFAULT_REPS: usize = 100_000;
