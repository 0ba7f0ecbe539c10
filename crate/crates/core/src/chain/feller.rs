use super::rng::RngStream;
use super::{DrawStats, Sampler, DEFAULT_MAX_DRAWS};
use crate::{Error, ModelParams, Result};

/// Rejection sampler on the Feller coupling: independent
/// `ξ_i ~ Bernoulli(θ/(θ+i−1))`, cycles are the spacings of `1 ξ_2 ⋯ ξ_n 1`,
/// and a candidate is rejected as soon as it shows a spacing of length 1.
#[derive(Debug, Clone)]
pub struct FellerSampler {
    params: ModelParams,
    // p_one[i] = θ/(θ+i−1)
    p_one: Vec<f64>,
    max_draws: u64,
}

impl FellerSampler {
    pub fn new(params: ModelParams) -> Self {
        let theta = params.theta();
        let p_one = (0..=params.n())
            .map(|i| {
                if i == 0 {
                    0.0
                } else {
                    theta / (theta + i as f64 - 1.0)
                }
            })
            .collect();
        FellerSampler {
            params,
            p_one,
            max_draws: DEFAULT_MAX_DRAWS,
        }
    }

    pub fn with_max_draws(mut self, max_draws: u64) -> Self {
        self.max_draws = max_draws;
        self
    }

    /// One candidate, scanned from `ξ_n` down to `ξ_1 = 1`. Returns false on
    /// the first fixed point.
    fn attempt(&self, rng: &mut RngStream, out: &mut Vec<usize>, draws: &mut u64) -> bool {
        out.clear();
        let n = self.params.n();
        let mut last_one = n + 1;
        for i in (2..=n).rev() {
            *draws += 1;
            if rng.uniform() < self.p_one[i] {
                let gap = last_one - i;
                if gap == 1 {
                    return false;
                }
                out.push(gap);
                last_one = i;
            }
        }
        let gap = last_one - 1;
        if gap == 1 {
            return false;
        }
        out.push(gap);
        true
    }
}

impl Sampler for FellerSampler {
    fn params(&self) -> ModelParams {
        self.params
    }

    fn draw_into(&self, rng: &mut RngStream, lengths: &mut Vec<usize>) -> Result<DrawStats> {
        let mut stats = DrawStats::default();
        loop {
            stats.attempts += 1;
            if self.attempt(rng, lengths, &mut stats.draws) {
                return Ok(stats);
            }
            if stats.draws >= self.max_draws {
                return Err(Error::AttemptsExhausted {
                    attempts: stats.attempts,
                    draws: stats.draws,
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepted_samples_are_derangements() {
        let s = FellerSampler::new(ModelParams::new(30, 2.0).unwrap());
        let mut rng = RngStream::new(5, 0);
        let mut out = Vec::new();
        for _ in 0..500 {
            s.draw_into(&mut rng, &mut out).unwrap();
            assert_eq!(out.iter().sum::<usize>(), 30);
            assert!(out.iter().all(|&a| a >= 2));
        }
    }

    #[test]
    fn guard_trips() {
        // λ_200(50) is tiny; a 1000-draw budget cannot succeed
        let s = FellerSampler::new(ModelParams::new(200, 50.0).unwrap()).with_max_draws(1000);
        let mut rng = RngStream::new(5, 0);
        let mut out = Vec::new();
        match s.draw_into(&mut rng, &mut out) {
            Err(Error::AttemptsExhausted { draws, .. }) => assert!(draws >= 1000),
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }
}
