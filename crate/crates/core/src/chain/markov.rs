use super::eta::{DerangementSample, EtaSequence, OrderedCycleLengths};
use super::rng::RngStream;
use super::{DrawStats, Sampler};
use crate::exact::LambdaTable;
use crate::{Error, ModelParams, Result};

/// Row of the transition matrix out of state 0 at step `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionRow {
    /// `P(η_r = 0 | η_{r+1} = 0)`
    pub p_stay0: f64,
    /// `P(η_r = 1 | η_{r+1} = 0)`
    pub p_emit1: f64,
}

/// Transition out of state 0 at step `3 ≤ r`:
/// `p_stay0 = (θ+r−1)λ_r / ((θ+r−1)λ_r + θλ_{r−1})`.
///
/// From state 1 the chain always moves to 0, and steps `r = 2, 1` are forced
/// (`η_2 = 0`, `η_1 = 1`), so those rows are never stored.
pub fn transition_row(r: usize, table: &LambdaTable) -> Result<TransitionRow> {
    if r < 3 {
        return Err(Error::InvalidParams(format!(
            "step {r}: rows below 3 are forced"
        )));
    }
    let p_stay0 = table.stay_probability(r)?;
    Ok(TransitionRow {
        p_stay0,
        p_emit1: 1.0 - p_stay0,
    })
}

/// The η Markov-chain sampler: one uniform per free step, Θ(n) per draw
/// whatever θ is.
#[derive(Debug, Clone)]
pub struct ChainSampler {
    params: ModelParams,
    // emit[r] = P(η_r = 1 | η_{r+1} = 0); zero outside 3..n-1
    emit: Vec<f64>,
}

impl ChainSampler {
    pub fn new(params: ModelParams) -> Self {
        let n = params.n();
        let table = LambdaTable::new(params.theta(), n).expect("validated theta");
        let mut emit = vec![0.0; n + 1];
        for (r, p) in emit.iter_mut().enumerate().take(n).skip(3) {
            *p = transition_row(r, &table).expect("row in range").p_emit1;
        }
        ChainSampler { params, emit }
    }

    /// The precomputed `P(η_r = 1 | η_{r+1} = 0)` indexed by `r`.
    pub fn emit_probabilities(&self) -> &[f64] {
        &self.emit
    }

    /// Probability of producing exactly `eta`, as the product of transition
    /// probabilities along its path.
    pub fn path_probability(&self, eta: &EtaSequence) -> f64 {
        let n = self.params.n();
        assert_eq!(eta.n(), n);
        let mut p = 1.0;
        let mut prev = 1u8;
        for r in (1..=n).rev() {
            let bit = eta.at(r);
            p *= match (prev, r) {
                (_, 1) => f64::from(bit),
                (1, _) | (_, 2) => f64::from(1 - bit),
                _ if r == n => f64::from(1 - bit),
                _ if bit == 1 => self.emit[r],
                _ => 1.0 - self.emit[r],
            };
            prev = bit;
        }
        p
    }

    /// Runs the chain `η_{n+1} = 1, η_n, …, η_1` and returns the bits.
    pub fn sample_eta(&self, rng: &mut RngStream) -> EtaSequence {
        let n = self.params.n();
        let mut bits = Vec::with_capacity(n);
        let mut prev = 1u8;
        for r in (1..=n).rev() {
            let bit = if r == 1 {
                1
            } else if prev == 1 || r == 2 || r == n {
                0
            } else {
                u8::from(rng.uniform() < self.emit[r])
            };
            bits.push(bit);
            prev = bit;
        }
        debug_assert!(EtaSequence::new(bits.clone()).is_ok());
        EtaSequence::new(bits).expect("chain output lies in the admissible set")
    }

    /// Same law as [`sample_eta`](Self::sample_eta) followed by
    /// [`eta_to_lengths`](super::eta_to_lengths), written straight into `out`.
    pub fn sample_lengths_into(&self, rng: &mut RngStream, out: &mut Vec<usize>) {
        let n = self.params.n();
        // at most n/2 cycles; written without data-dependent branches so the
        // cost per step does not depend on how often the chain emits
        out.clear();
        out.resize(n / 2 + 1, 0);
        let mut len = 0;
        let mut last_one = n + 1;
        // η_n = 0 always; after a 1 the next bit is 0 without a draw
        let mut r = n - 1;
        while r >= 3 {
            let hit = usize::from(rng.uniform() < self.emit[r]);
            out[len] = last_one - r;
            len += hit;
            last_one = if hit == 1 { r } else { last_one };
            r -= 1 + hit;
        }
        out[len] = last_one - 1;
        out.truncate(len + 1);
        debug_assert!(out.iter().all(|&a| a >= 2) && out.iter().sum::<usize>() == n);
    }

    pub fn sample_lengths(&self, rng: &mut RngStream) -> OrderedCycleLengths {
        let mut out = Vec::new();
        self.sample_lengths_into(rng, &mut out);
        OrderedCycleLengths::from_vec_unchecked(out)
    }

    pub fn sample(&self, rng: &mut RngStream) -> DerangementSample {
        DerangementSample::from_lengths(self.sample_lengths(rng))
    }
}

impl Sampler for ChainSampler {
    fn params(&self) -> ModelParams {
        self.params
    }

    fn draw_into(&self, rng: &mut RngStream, lengths: &mut Vec<usize>) -> Result<DrawStats> {
        self.sample_lengths_into(rng, lengths);
        Ok(DrawStats {
            attempts: 1,
            draws: self.params.n().saturating_sub(3) as u64,
        })
    }
}

/// Convenience wrapper building a [`ChainSampler`] for a single draw.
pub fn sample_eta(params: ModelParams, rng: &mut RngStream) -> EtaSequence {
    ChainSampler::new(params).sample_eta(rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_evaluated_row() {
        let table = LambdaTable::new(1.0, 5).unwrap();
        let row = transition_row(3, &table).unwrap();
        assert!((row.p_emit1 - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(row.p_stay0 + row.p_emit1, 1.0);
        assert!(transition_row(2, &table).is_err());
        assert!(transition_row(6, &table).is_err());
    }

    #[test]
    fn rows_are_probabilities() {
        for &t in &[0.01, 0.5, 1.0, 5.0, 80.0] {
            let table = LambdaTable::new(t, 400).unwrap();
            for r in 3..400 {
                let row = transition_row(r, &table).unwrap();
                assert!((0.0..=1.0).contains(&row.p_stay0));
                assert!((0.0..=1.0).contains(&row.p_emit1));
                assert_eq!(row.p_stay0 + row.p_emit1, 1.0);
            }
        }
    }

    #[test]
    fn size_two_and_three_are_deterministic() {
        let mut rng = RngStream::new(1, 0);
        let two = ChainSampler::new(ModelParams::new(2, 3.0).unwrap());
        let three = ChainSampler::new(ModelParams::new(3, 3.0).unwrap());
        for _ in 0..50 {
            assert_eq!(two.sample_eta(&mut rng).bits(), &[0, 1]);
            assert_eq!(two.sample_lengths(&mut rng).as_slice(), &[2]);
            assert_eq!(three.sample_lengths(&mut rng).as_slice(), &[3]);
        }
    }

    #[test]
    fn fast_path_matches_bit_path() {
        // both consume one uniform per free step, so identical streams agree
        for &(n, t) in &[(10usize, 0.5), (37, 1.0), (64, 5.0)] {
            let s = ChainSampler::new(ModelParams::new(n, t).unwrap());
            let mut a = RngStream::new(99, 3);
            let mut b = RngStream::new(99, 3);
            for _ in 0..200 {
                assert_eq!(s.sample_eta(&mut a).lengths(), s.sample_lengths(&mut b));
            }
        }
    }

    #[test]
    fn path_probability_of_single_four_cycle() {
        let s = ChainSampler::new(ModelParams::new(4, 1.0).unwrap());
        let eta = EtaSequence::new(vec![0, 0, 0, 1]).unwrap();
        assert!((s.path_probability(&eta) - 2.0 / 3.0).abs() < 1e-15);
        let other = EtaSequence::new(vec![0, 1, 0, 1]).unwrap();
        assert!((s.path_probability(&other) - 1.0 / 3.0).abs() < 1e-15);
    }
}
