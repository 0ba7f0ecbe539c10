use num_bigint::BigUint;
use statrs::function::gamma::ln_gamma;

use super::combinatorics::{derangement_cycle_counts, ln_biguint};
use super::lambda::LambdaTable;
use super::{ln_factorial, rising_factorial_log, EULER_GAMMA};
use crate::{Error, ModelParams, Result};

/// Cached log-masses for one `(n, θ)`.
///
/// `ln_mass(m) = ln(λ_m θ_(m) / m!)` is the log of the total ESF weight
/// `Σ ∏_j (θ/j)^{c_j}/c_j!` over derangement cycle types of size `m`. Every
/// moment is a ratio of two such masses.
#[derive(Debug, Clone)]
pub struct ExactModel {
    params: ModelParams,
    lambda: LambdaTable,
    ln_mass: Vec<f64>,
}

impl ExactModel {
    pub fn new(params: ModelParams) -> Self {
        let theta = params.theta();
        let lambda = LambdaTable::new(theta, params.n()).expect("validated theta");
        let ln_mass = (0..=params.n())
            .map(|m| lambda[m].ln() + rising_factorial_log(theta, m).value() - ln_factorial(m))
            .collect();
        ExactModel {
            params,
            lambda,
            ln_mass,
        }
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn lambda(&self) -> &LambdaTable {
        &self.lambda
    }

    fn n(&self) -> usize {
        self.params.n()
    }

    fn theta(&self) -> f64 {
        self.params.theta()
    }

    /// `E ∏_j C̃_j^{[r_j]}` (falling factorial moments). Zero once
    /// `m = Σ j·r_j` exceeds `n`.
    pub fn factorial_moment(&self, orders: &[(usize, u32)]) -> Result<f64> {
        let mut m = 0usize;
        let mut log_weight = 0.0;
        for &(j, r) in orders {
            if j < 2 {
                return Err(Error::InvalidParams(format!(
                    "cycle length {j} has no moments in a derangement"
                )));
            }
            m += j * r as usize;
            log_weight += r as f64 * (self.theta() / j as f64).ln();
        }
        if m > self.n() {
            return Ok(0.0);
        }
        Ok((self.ln_mass[self.n() - m] - self.ln_mass[self.n()] + log_weight).exp())
    }

    /// `E C̃_j(n)`.
    pub fn mean_cycle_count(&self, j: usize) -> Result<f64> {
        self.check_length(j)?;
        self.factorial_moment(&[(j, 1)])
    }

    fn check_length(&self, j: usize) -> Result<()> {
        if j < 2 || j > self.n() {
            return Err(Error::InvalidParams(format!(
                "cycle length {j} outside 2..={}",
                self.n()
            )));
        }
        Ok(())
    }

    /// `P(C̃_j(n) = r)` by inverting the factorial moments:
    /// `p_r = (1/r!) Σ_{i≥r} (−1)^{i−r} u_i/(i−r)!`.
    pub fn cycle_count_pmf(&self, j: usize, r: usize) -> Result<f64> {
        self.check_length(j)?;
        let top = self.n() / j;
        if r > top {
            return Ok(0.0);
        }
        let log_ratio = (self.theta() / j as f64).ln();
        let (mut pos, mut neg) = (0.0f64, 0.0f64);
        for i in r..=top {
            let ln_u =
                self.ln_mass[self.n() - j * i] - self.ln_mass[self.n()] + i as f64 * log_ratio;
            let term = (ln_u - ln_factorial(i - r) - ln_factorial(r)).exp();
            if (i - r).is_multiple_of(2) {
                pos += term;
            } else {
                neg += term;
            }
        }
        Ok((pos - neg).clamp(0.0, 1.0))
    }

    /// Full distribution of `C̃_j(n)` over `0..=n/j`.
    pub fn cycle_count_distribution(&self, j: usize) -> Result<Vec<f64>> {
        (0..=self.n() / j)
            .map(|r| self.cycle_count_pmf(j, r))
            .collect()
    }

    /// `P(K̃_n = k)` for `k` in `0..=n/2` (the `k = 0` entry is always zero).
    pub fn num_cycles_distribution(&self) -> Vec<f64> {
        let counts = derangement_cycle_counts(self.n());
        let base =
            self.lambda[self.n()].ln() + rising_factorial_log(self.theta(), self.n()).value();
        (0..=self.n() / 2)
            .map(|k| num_cycles_term(&counts[k], k, self.theta(), base))
            .collect()
    }

    /// `E K̃_n = Σ_j E C̃_j(n)`.
    pub fn num_cycles_mean(&self) -> f64 {
        (2..=self.n())
            .map(|j| self.mean_cycle_count(j).expect("j in range"))
            .sum()
    }

    /// `P(C̃_n(n) = 1) = (n!/θ_(n)) (θ/n) / λ_n(θ)`.
    pub fn single_cycle_prob(&self) -> f64 {
        let n = self.n();
        (ln_factorial(n) - rising_factorial_log(self.theta(), n).value()
            + (self.theta() / n as f64).ln()
            - self.lambda[n].ln())
        .exp()
    }

    /// `P(A_1(n) > l)`, the first generated cycle outlasting `l`.
    pub fn first_cycle_survival(&self, l: usize) -> Result<f64> {
        let n = self.n();
        if l > n {
            return Err(Error::InvalidParams(format!("l = {l} exceeds n = {n}")));
        }
        if l == 0 {
            return Ok(1.0);
        }
        let mut p = 1.0;
        for r in (n - l + 1)..n {
            p *= self.lambda.stay_probability(r)?;
        }
        Ok(p)
    }

    /// `E A_1(n) = Σ_{l<n} P(A_1(n) > l)`.
    pub fn first_cycle_mean(&self) -> f64 {
        // survival telescopes from the top, so build it in one pass
        let n = self.n();
        let mut total = 1.0; // l = 0
        let mut p = 1.0;
        for l in 1..n {
            let r = n - l + 1;
            if r < n {
                p *= self.lambda.stay_probability(r).expect("in range");
            }
            total += p;
        }
        total
    }
}

fn num_cycles_term(count: &BigUint, k: usize, theta: f64, ln_norm: f64) -> f64 {
    (k as f64 * theta.ln() + ln_biguint(count) - ln_norm).exp()
}

pub fn factorial_moment(params: ModelParams, orders: &[(usize, u32)]) -> Result<f64> {
    ExactModel::new(params).factorial_moment(orders)
}

pub fn mean_cycle_count(params: ModelParams, j: usize) -> Result<f64> {
    ExactModel::new(params).mean_cycle_count(j)
}

pub fn cycle_count_pmf(params: ModelParams, j: usize, r: usize) -> Result<f64> {
    ExactModel::new(params).cycle_count_pmf(j, r)
}

/// `P(K̃_n = k) = θ^k D(n,k) / (λ_n(θ) θ_(n))`.
pub fn num_cycles_pmf(params: ModelParams, k: usize) -> Result<f64> {
    let n = params.n();
    if k > n {
        return Ok(0.0);
    }
    let counts = derangement_cycle_counts(n);
    let lambda = LambdaTable::new(params.theta(), n)?;
    let ln_norm = lambda[n].ln() + rising_factorial_log(params.theta(), n).value();
    Ok(num_cycles_term(&counts[k], k, params.theta(), ln_norm))
}

pub fn num_cycles_mean(params: ModelParams) -> f64 {
    ExactModel::new(params).num_cycles_mean()
}

pub fn single_cycle_prob(params: ModelParams) -> f64 {
    ExactModel::new(params).single_cycle_prob()
}

/// Large-`n` approximation `Γ(θ+1) (e/n)^θ` of the single-cycle probability.
pub fn single_cycle_asymptotic(params: ModelParams) -> f64 {
    let theta = params.theta();
    (ln_gamma(theta + 1.0) + theta * (1.0 - (params.n() as f64).ln())).exp()
}

pub fn first_cycle_survival(params: ModelParams, l: usize) -> Result<f64> {
    ExactModel::new(params).first_cycle_survival(l)
}

/// Limit as `n → ∞` of the probability that all cycle lengths are distinct:
/// `e^{−θ(γ−1)} / Γ(θ+2)`.
pub fn distinct_lengths_limit(theta: f64) -> f64 {
    (-theta * (EULER_GAMMA - 1.0) - ln_gamma(theta + 2.0)).exp()
}
