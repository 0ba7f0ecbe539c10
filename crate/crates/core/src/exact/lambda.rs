use serde::{Deserialize, Serialize};
use std::ops::Index;

use crate::params::check_theta;
use crate::{Error, Result};

/// Largest tolerated ratio between the biggest alternating-sum term and the
/// result. Beyond this about twelve decimal digits have cancelled.
pub const ALTSUM_MAX_CANCELLATION: f64 = 1e12;

/// `λ_0(θ), …, λ_N(θ)`: the probability that an ESF(θ) permutation of size `i`
/// has no fixed point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaTable {
    theta: f64,
    values: Vec<f64>,
}

impl LambdaTable {
    /// Builds the table with the two-term forward recurrence
    /// `λ_i = (i−1)/(θ+i−1) · (λ_{i−1} + θ/(θ+i−2) · λ_{i−2})`,
    /// starting from `λ_0 = 1`, `λ_1 = 0`.
    pub fn new(theta: f64, n_max: usize) -> Result<Self> {
        check_theta(theta)?;
        let mut values = Vec::with_capacity(n_max + 1);
        values.push(1.0);
        if n_max >= 1 {
            values.push(0.0);
        }
        for i in 2..=n_max {
            let k = i as f64;
            let next = (k - 1.0) / (theta + k - 1.0)
                * (values[i - 1] + theta / (theta + k - 2.0) * values[i - 2]);
            values.push(next);
        }
        Ok(LambdaTable { theta, values })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, i: usize) -> Result<f64> {
        self.values.get(i).copied().ok_or(Error::IndexOutOfRange {
            index: i,
            max: self.n_max(),
        })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// `(θ+r−1)λ_r / ((θ+r−1)λ_r + θλ_{r−1})`: the chance that the cycle open at
    /// position `r+1` continues through position `r`.
    pub fn stay_probability(&self, r: usize) -> Result<f64> {
        if r == 0 {
            return Err(Error::IndexOutOfRange {
                index: 0,
                max: self.n_max(),
            });
        }
        let lr = self.get(r)?;
        let lr1 = self.values[r - 1];
        let keep = (self.theta + r as f64 - 1.0) * lr;
        Ok(keep / (keep + self.theta * lr1))
    }
}

impl Index<usize> for LambdaTable {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

pub fn lambda_table(theta: f64, n_max: usize) -> Result<LambdaTable> {
    LambdaTable::new(theta, n_max)
}

/// Evaluates `λ_n(θ)` from the inclusion–exclusion sum
/// `n!/Γ(n+θ) Σ_j (−1)^j θ^j/j! · Γ(n+θ−j)/(n−j)!`.
///
/// Term magnitudes are tracked in log form through the exact ratio of
/// consecutive terms; positive and negative parts are accumulated separately.
/// Returns [`Error::PrecisionLoss`] when the largest term exceeds the result by
/// more than [`ALTSUM_MAX_CANCELLATION`].
pub fn lambda_altsum(theta: f64, n: usize) -> Result<f64> {
    check_theta(theta)?;
    match n {
        0 => return Ok(1.0),
        1 => return Ok(0.0),
        _ => {}
    }
    // |t_j| / |t_{j-1}| = θ (n−j+1) / (j (n+θ−j)),  t_0 = 1
    let nf = n as f64;
    let mut log_mags = Vec::with_capacity(n + 1);
    let mut acc = 0.0f64;
    log_mags.push(acc);
    for j in 1..=n {
        let jf = j as f64;
        acc += (theta * (nf - jf + 1.0) / (jf * (nf + theta - jf))).ln();
        log_mags.push(acc);
    }
    let max_log = log_mags.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut pos, mut neg) = (0.0f64, 0.0f64);
    for (j, &lm) in log_mags.iter().enumerate() {
        let t = (lm - max_log).exp();
        if j % 2 == 0 {
            pos += t;
        } else {
            neg += t;
        }
    }
    let scaled = pos - neg;
    let value = scaled * max_log.exp();
    let ratio = 1.0 / scaled.abs();
    // written so that a NaN ratio is rejected too
    let trusted = ratio <= ALTSUM_MAX_CANCELLATION;
    if !trusted {
        return Err(Error::PrecisionLoss { value, ratio });
    }
    Ok(value)
}
