use rand_distr::{Distribution, Poisson};
use statrs::function::gamma::ln_gamma;

use super::rng::RngStream;
use super::tilt::TiltSolution;
use super::{DrawStats, Sampler, DEFAULT_MAX_DRAWS};
use crate::exact::{ln_factorial, rising_factorial_log, LambdaTable, EULER_GAMMA};
use crate::{Error, ModelParams, Result};

// Inversion by sequential search below this mean, PTRS above.
const INVERSION_MAX_MEAN: f64 = 10.0;

#[derive(Debug, Clone)]
enum PoissonDraw {
    Inversion { mean: f64, p0: f64 },
    Ptrs(Poisson<f64>),
}

impl PoissonDraw {
    fn new(mean: f64) -> Self {
        if mean < INVERSION_MAX_MEAN {
            PoissonDraw::Inversion {
                mean,
                p0: (-mean).exp(),
            }
        } else {
            PoissonDraw::Ptrs(Poisson::new(mean).expect("positive finite mean"))
        }
    }

    #[inline]
    fn draw(&self, rng: &mut RngStream) -> usize {
        match *self {
            PoissonDraw::Inversion { mean, p0 } => {
                let u = rng.uniform();
                let mut k = 0usize;
                let mut p = p0;
                let mut cdf = p0;
                while u >= cdf {
                    k += 1;
                    p *= mean / k as f64;
                    let next = cdf + p;
                    if next == cdf {
                        // tail below double resolution
                        break;
                    }
                    cdf = next;
                }
                k
            }
            PoissonDraw::Ptrs(ref d) => d.sample(rng) as usize,
        }
    }
}

/// Conditioning-relation sampler: independent `Z_j ~ Poisson(x^j θ/j)` for
/// `j = 2..n`, accepted when `Σ j·Z_j = n`.
///
/// Accepted counts form the cycle type; the ordered lengths are then put in
/// size-biased random order, which is the order the Markov chain generates.
#[derive(Debug, Clone)]
pub struct PoissonSampler {
    params: ModelParams,
    tilt: TiltSolution,
    // indexed by j, entries 0 and 1 unused
    draws: Vec<PoissonDraw>,
    max_draws: u64,
}

impl PoissonSampler {
    pub fn new(params: ModelParams, tilt: TiltSolution) -> Result<Self> {
        if tilt.theta != params.theta() {
            return Err(Error::InvalidParams(format!(
                "tilt solved for θ = {} but model has θ = {}",
                tilt.theta,
                params.theta()
            )));
        }
        let n = params.n();
        let x = tilt.x(n);
        let draws = (0..=n)
            .map(|j| {
                let mean = if j < 2 {
                    1.0
                } else {
                    x.powi(j as i32) * params.theta() / j as f64
                };
                PoissonDraw::new(mean)
            })
            .collect();
        Ok(PoissonSampler {
            params,
            tilt,
            draws,
            max_draws: DEFAULT_MAX_DRAWS,
        })
    }

    pub fn with_max_draws(mut self, max_draws: u64) -> Self {
        self.max_draws = max_draws;
        self
    }

    pub fn tilt(&self) -> &TiltSolution {
        &self.tilt
    }

    /// One candidate from `j = n` downward, abandoned once `Σ j·Z_j > n`.
    /// Leaves the parts (in descending order) in `parts`.
    fn attempt(&self, rng: &mut RngStream, parts: &mut Vec<usize>, draws: &mut u64) -> bool {
        parts.clear();
        let n = self.params.n();
        let mut total = 0usize;
        for j in (2..=n).rev() {
            *draws += 1;
            let z = self.draws[j].draw(rng);
            if z > 0 {
                total += j * z;
                if total > n {
                    return false;
                }
                parts.extend(std::iter::repeat_n(j, z));
            }
        }
        total == n
    }
}

/// Reorders `parts` in place into size-biased order: each next cycle is
/// chosen with probability proportional to its length.
fn size_biased_order(parts: &mut [usize], rng: &mut RngStream) {
    let mut remaining: usize = parts.iter().sum();
    for k in 0..parts.len() {
        let mut u = rng.below(remaining);
        let mut pick = k;
        while u >= parts[pick] {
            u -= parts[pick];
            pick += 1;
        }
        parts.swap(k, pick);
        remaining -= parts[k];
    }
}

impl Sampler for PoissonSampler {
    fn params(&self) -> ModelParams {
        self.params
    }

    fn draw_into(&self, rng: &mut RngStream, lengths: &mut Vec<usize>) -> Result<DrawStats> {
        let mut stats = DrawStats::default();
        loop {
            stats.attempts += 1;
            if self.attempt(rng, lengths, &mut stats.draws) {
                size_biased_order(lengths, rng);
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

/// Exact acceptance probability of the conditioned-Poisson sampler,
/// `P(T_1n = n) = x^n e^{−θ Σ_{j=2}^n x^j/j} λ_n(θ) θ_(n) / n!`.
pub fn conditioned_poisson_acceptance(params: ModelParams, tilt: &TiltSolution) -> f64 {
    let n = params.n();
    let theta = params.theta();
    let ln_x = -tilt.c / n as f64;
    let mean_sum: f64 = (2..=n).map(|j| (j as f64 * ln_x).exp() / j as f64).sum();
    let lambda = LambdaTable::new(theta, n).expect("validated theta")[n];
    (n as f64 * ln_x - theta * mean_sum + lambda.ln() + rising_factorial_log(theta, n).value()
        - ln_factorial(n))
    .exp()
}

/// Large-`n` form `e^{−γθ} e^{u(c)} / (n Γ(θ))` of the acceptance probability.
pub fn conditioned_poisson_acceptance_asymptotic(params: ModelParams, tilt: &TiltSolution) -> f64 {
    let theta = params.theta();
    (-EULER_GAMMA * theta - ln_gamma(theta)).exp() * tilt.speedup / params.n() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::solve_tilt;

    #[test]
    fn inversion_mean_and_variance() {
        let mut rng = RngStream::new(11, 0);
        for &mean in &[1e-4, 0.3, 2.5, 9.0, 30.0] {
            let d = PoissonDraw::new(mean);
            let n = 200_000;
            let xs: Vec<f64> = (0..n).map(|_| d.draw(&mut rng) as f64).collect();
            let m = xs.iter().sum::<f64>() / n as f64;
            let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
            let se = (mean / n as f64).sqrt();
            assert!((m - mean).abs() < 5.0 * se, "mean {mean}: {m}");
            assert!((v - mean).abs() < 0.05 * mean + 1e-3, "var {mean}: {v}");
        }
    }

    #[test]
    fn size_biased_first_pick() {
        // parts (4, 2): first is the 4 with probability 4/6
        let mut rng = RngStream::new(2, 0);
        let trials = 60_000;
        let mut hits = 0;
        for _ in 0..trials {
            let mut p = [2, 4];
            size_biased_order(&mut p, &mut rng);
            if p[0] == 4 {
                hits += 1;
            }
        }
        let f = hits as f64 / trials as f64;
        assert!((f - 2.0 / 3.0).abs() < 0.01, "{f}");
    }

    #[test]
    fn mismatched_tilt_rejected() {
        let p = ModelParams::new(10, 2.0).unwrap();
        assert!(PoissonSampler::new(p, solve_tilt(3.0)).is_err());
    }

    #[test]
    fn asymptotic_acceptance_values() {
        let p = ModelParams::new(10, 0.5).unwrap();
        let r = conditioned_poisson_acceptance_asymptotic(p, &solve_tilt(0.5));
        assert_eq!((r * 1000.0).round() / 1000.0, 0.061);
        let p = ModelParams::new(50, 0.5).unwrap();
        let r = conditioned_poisson_acceptance_asymptotic(p, &solve_tilt(0.5));
        assert_eq!((r * 1000.0).round() / 1000.0, 0.012);
    }
}
