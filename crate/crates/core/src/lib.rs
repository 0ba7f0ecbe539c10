//! Exact probabilities and random generation for θ-biased derangements.
//!
//! A permutation of `{1, …, n}` with `k` cycles is drawn with probability
//! `θ^k / θ_(n)` (the Ewens sampling formula, ESF(θ)); conditioning on the
//! absence of fixed points gives a θ-biased derangement. This crate provides
//!
//! * [`exact`]: closed-form cycle statistics in numerically stable form,
//! * [`chain`]: three samplers, the fast one being a `{0,1}` non-homogeneous
//!   Markov chain whose spacings between 1s are the ordered cycle lengths,
//! * [`oracle`]: exhaustive small-`n` ground truth used to check everything
//!   else,
//! * [`harness`]: Monte Carlo estimation, table reproduction and timing.
//!
//! ```
//! use derange::chain::{ChainSampler, RngStream};
//! use derange::ModelParams;
//!
//! let params = ModelParams::new(10, 1.0)?;
//! let sampler = ChainSampler::new(params);
//! let mut rng = RngStream::new(7, 0);
//! let lengths = sampler.sample_lengths(&mut rng);
//! assert_eq!(lengths.total(), 10);
//! assert!(lengths.as_slice().iter().all(|&a| a >= 2));
//! # Ok::<(), derange::Error>(())
//! ```

pub mod chain;
mod error;
pub mod exact;
pub mod harness;
pub mod oracle;
mod params;

pub use error::{Error, Result};
pub use params::ModelParams;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/exact.md")]
    pub struct Exact;
    #[doc = include_str!("../../../book/src/chain.md")]
    pub struct Chain;
    #[doc = include_str!("../../../book/src/rejection.md")]
    pub struct Rejection;
    #[doc = include_str!("../../../book/src/oracle.md")]
    pub struct Oracle;
    #[doc = include_str!("../../../book/src/harness.md")]
    pub struct Harness;
}
