//! Exhaustive ground truth for small `n`.
//!
//! Derangement cycle structures are enumerated as compositions of `n` into
//! parts `≥ 2` (equivalently the bit strings of `Δ_n`), never as `n!`
//! permutations, which pushes exact answers out to `n = 25`. A brute-force
//! permutation enumerator for `n ≤ 9` and an exact-rational path are kept for
//! arbitration. The identity checks run over every member of `Δ_n`: the shift
//! ratio and the θ-free ratio between paths with equally many cycles, plus the
//! parity and monotonicity inequalities.

mod delta;
mod identities;
mod permutations;
mod rational;
mod suite;

pub use delta::{
    enumerate_cycle_types, enumerate_delta, exact_eta_pmf, xi_path_weight, DeltaOracle,
    WeightedOutcome,
};
pub use identities::{
    monotone_probabilities, parity_probabilities, parity_probabilities_dp, shift,
    verify_monotone_identity, verify_parity_identity, verify_ratio_proposition, verify_shift_ratio,
    IdentityReport, PropositionReport, ShiftReport, ShiftResult,
};
pub use permutations::{brute_force_cycle_types, for_each_permutation};
pub use rational::{cycle_count_pmf_exact, enumerate_cycle_types_exact};
pub use suite::{verify_all, CheckResult, VerifyReport};

/// Largest `n` for cycle-type enumeration.
pub const CYCLE_TYPE_CAP: usize = 14;
/// Largest `n` for enumerating `Δ_n`.
pub const DELTA_CAP: usize = 25;
/// Largest `n` for the brute-force permutation walk.
pub const PERMUTATION_CAP: usize = 9;
/// Largest `n` for the parity dynamic programme.
pub const PARITY_DP_CAP: usize = 200;
