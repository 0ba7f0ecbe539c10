//! Closed-form quantities for θ-biased derangements.
//!
//! Every quantity is a ratio of ESF masses, so the workhorse is the derangement
//! probability `λ_m(θ)` for `m ≤ n` ([`LambdaTable`]) together with
//! log-rising-factorials. Ratios such as `n!/θ_(n)` are carried in log space and
//! only exponentiated on return.

mod combinatorics;
mod cycle_type;
mod cycles;
mod lambda;

pub use combinatorics::{
    binomial, derangement_cycle_count, derangement_cycle_counts, derangement_number, ln_biguint,
    stirling_first_triangle, stirling_first_unsigned,
};
pub use cycle_type::CycleType;
pub use cycles::{
    cycle_count_pmf, distinct_lengths_limit, factorial_moment, first_cycle_survival,
    mean_cycle_count, num_cycles_mean, num_cycles_pmf, single_cycle_asymptotic, single_cycle_prob,
    ExactModel,
};
pub use lambda::{lambda_altsum, lambda_table, LambdaTable, ALTSUM_MAX_CANCELLATION};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use std::ops::{Add, Sub};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

/// A probability or weight held on the natural-log scale.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LogWeight(pub f64);

impl LogWeight {
    pub const ONE: LogWeight = LogWeight(0.0);
    pub const ZERO: LogWeight = LogWeight(f64::NEG_INFINITY);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn exp(self) -> f64 {
        self.0.exp()
    }
}

impl Add for LogWeight {
    type Output = LogWeight;

    /// Multiplication of the underlying weights.
    fn add(self, rhs: LogWeight) -> LogWeight {
        LogWeight(self.0 + rhs.0)
    }
}

impl Sub for LogWeight {
    type Output = LogWeight;

    fn sub(self, rhs: LogWeight) -> LogWeight {
        LogWeight(self.0 - rhs.0)
    }
}

// Below this length the product is summed term by term; above it the
// log-gamma difference is more accurate.
const DIRECT_RISING_MAX: usize = 32;

/// `ln θ_(n)` where `θ_(n) = θ(θ+1)⋯(θ+n−1)` and `θ_(0) = 1`.
pub fn rising_factorial_log(theta: f64, n: usize) -> LogWeight {
    debug_assert!(theta > 0.0);
    if n <= DIRECT_RISING_MAX {
        LogWeight((0..n).map(|i| (theta + i as f64).ln()).sum())
    } else {
        LogWeight(ln_gamma(theta + n as f64) - ln_gamma(theta))
    }
}

/// `ln n!`.
pub fn ln_factorial(n: usize) -> f64 {
    rising_factorial_log(1.0, n).value()
}
