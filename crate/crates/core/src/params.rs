use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Size `n` and bias `θ` of a derangement model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    n: usize,
    theta: f64,
}

impl ModelParams {
    /// Validates `n ≥ 2` (no derangement of size 1 exists) and finite `θ > 0`.
    pub fn new(n: usize, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        if n < 2 {
            return Err(Error::InvalidParams(format!(
                "n = {n}: derangements need n >= 2"
            )));
        }
        Ok(ModelParams { n, theta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if theta.is_finite() && theta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!(
            "theta = {theta}: must be finite and positive"
        )))
    }
}
