//! Samplers for θ-biased derangements.
//!
//! * [`ChainSampler`]: the `{0,1}` non-homogeneous Markov chain whose spacings
//!   between 1s are the ordered cycle lengths. No rejection; cost is linear in
//!   `n` and flat in θ.
//! * [`FellerSampler`]: Feller-coupling ESF(θ) permutations, rejecting any
//!   with a fixed point. Acceptance rate `λ_n(θ) ≈ e^{−θ}`.
//! * [`PoissonSampler`]: independent Poisson cycle counts conditioned on
//!   `Σ j·Z_j = n`, with exponential tilting to raise the acceptance rate.
//!
//! All three emit ordered cycle lengths with the same law: the chain's
//! generation order, which is the size-biased order of the cycles.

mod eta;
mod feller;
mod markov;
mod poisson;
mod realize;
mod rng;
mod tilt;

pub use eta::{eta_to_lengths, DerangementSample, EtaSequence, OrderedCycleLengths};
pub use feller::FellerSampler;
pub use markov::{sample_eta, transition_row, ChainSampler, TransitionRow};
pub use poisson::{
    conditioned_poisson_acceptance, conditioned_poisson_acceptance_asymptotic, PoissonSampler,
};
pub use realize::realize_permutation;
pub use rng::RngStream;
pub use tilt::{solve_tilt, TiltSolution};

use crate::{ModelParams, Result};

/// Default cap on Bernoulli/Poisson draws before a rejection sampler gives up.
pub const DEFAULT_MAX_DRAWS: u64 = 1_000_000_000;

/// Work spent producing one accepted derangement.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DrawStats {
    /// Candidate structures generated (1 for the chain).
    pub attempts: u64,
    /// Random Bernoulli/Poisson/uniform variates consumed.
    pub draws: u64,
}

impl std::ops::AddAssign for DrawStats {
    fn add_assign(&mut self, rhs: DrawStats) {
        self.attempts += rhs.attempts;
        self.draws += rhs.draws;
    }
}

/// Common interface of the three samplers.
pub trait Sampler: Send + Sync {
    fn params(&self) -> ModelParams;

    /// Writes one derangement's ordered cycle lengths into `lengths`.
    fn draw_into(&self, rng: &mut RngStream, lengths: &mut Vec<usize>) -> Result<DrawStats>;

    fn sample(&self, rng: &mut RngStream) -> Result<(DerangementSample, DrawStats)> {
        let mut lengths = Vec::new();
        let stats = self.draw_into(rng, &mut lengths)?;
        let lengths = OrderedCycleLengths::new(lengths)?;
        Ok((DerangementSample::from_lengths(lengths), stats))
    }
}
