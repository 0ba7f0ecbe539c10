use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::chain::{
    solve_tilt, ChainSampler, DerangementSample, FellerSampler, PoissonSampler, Sampler,
    DEFAULT_MAX_DRAWS,
};
use crate::{Error, ModelParams, Result};

/// Generation method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Chain,
    Feller,
    Poisson,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Chain, Method::Feller, Method::Poisson];

    pub fn name(self) -> &'static str {
        match self {
            Method::Chain => "chain",
            Method::Feller => "feller",
            Method::Poisson => "poisson",
        }
    }

    /// Builds the sampler; the Poisson sampler uses the optimal tilt for θ.
    pub fn sampler(self, params: ModelParams) -> Result<Box<dyn Sampler>> {
        self.sampler_with_max_draws(params, DEFAULT_MAX_DRAWS)
    }

    /// As [`Method::sampler`], with the rejection samplers giving up on a
    /// single sample after `max_draws` variates.
    pub fn sampler_with_max_draws(
        self,
        params: ModelParams,
        max_draws: u64,
    ) -> Result<Box<dyn Sampler>> {
        Ok(match self {
            Method::Chain => Box::new(ChainSampler::new(params)),
            Method::Feller => Box::new(FellerSampler::new(params).with_max_draws(max_draws)),
            Method::Poisson => Box::new(
                PoissonSampler::new(params, solve_tilt(params.theta()))?.with_max_draws(max_draws),
            ),
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "method",
                name: s.to_string(),
            })
    }
}

/// A per-sample statistic of the ordered cycle lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    SingleCycle,
    DistinctLengths,
    AllOdd,
    AllEven,
    FirstIsLongest,
    MeanFirstCycle,
    MeanLongestCycle,
    WeaklyDecreasing,
    WeaklyIncreasing,
    NumCyclesMean,
}

impl Statistic {
    pub const ALL: [Statistic; 10] = [
        Statistic::SingleCycle,
        Statistic::DistinctLengths,
        Statistic::AllOdd,
        Statistic::AllEven,
        Statistic::FirstIsLongest,
        Statistic::MeanFirstCycle,
        Statistic::MeanLongestCycle,
        Statistic::WeaklyDecreasing,
        Statistic::WeaklyIncreasing,
        Statistic::NumCyclesMean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::SingleCycle => "single_cycle",
            Statistic::DistinctLengths => "distinct_lengths",
            Statistic::AllOdd => "all_odd",
            Statistic::AllEven => "all_even",
            Statistic::FirstIsLongest => "first_is_longest",
            Statistic::MeanFirstCycle => "mean_first_cycle",
            Statistic::MeanLongestCycle => "mean_longest_cycle",
            Statistic::WeaklyDecreasing => "weakly_decreasing",
            Statistic::WeaklyIncreasing => "weakly_increasing",
            Statistic::NumCyclesMean => "num_cycles_mean",
        }
    }

    /// Indicator statistics estimate a probability.
    pub fn is_probability(self) -> bool {
        !matches!(
            self,
            Statistic::MeanFirstCycle | Statistic::MeanLongestCycle | Statistic::NumCyclesMean
        )
    }

    /// Value on one sample given its ordered cycle lengths.
    pub fn evaluate(self, lengths: &[usize]) -> f64 {
        let indicator = |b: bool| if b { 1.0 } else { 0.0 };
        match self {
            Statistic::SingleCycle => indicator(lengths.len() == 1),
            Statistic::DistinctLengths => indicator(all_distinct(lengths)),
            Statistic::AllOdd => indicator(lengths.iter().all(|a| a % 2 == 1)),
            Statistic::AllEven => indicator(lengths.iter().all(|a| a % 2 == 0)),
            Statistic::FirstIsLongest => indicator(lengths.iter().all(|&a| a <= lengths[0])),
            Statistic::MeanFirstCycle => lengths[0] as f64,
            Statistic::MeanLongestCycle => lengths.iter().copied().max().unwrap_or(0) as f64,
            Statistic::WeaklyDecreasing => indicator(lengths.windows(2).all(|w| w[0] >= w[1])),
            Statistic::WeaklyIncreasing => indicator(lengths.windows(2).all(|w| w[0] <= w[1])),
            Statistic::NumCyclesMean => lengths.len() as f64,
        }
    }
}

fn all_distinct(lengths: &[usize]) -> bool {
    let mut v = lengths.to_vec();
    v.sort_unstable();
    v.windows(2).all(|w| w[0] != w[1])
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Statistic::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "statistic",
                name: s.to_string(),
            })
    }
}

/// 1 when all cycle lengths are distinct (no repeated length), else 0.
pub fn distinct_lengths_statistic(sample: &DerangementSample) -> u8 {
    u8::from(sample.cycle_type.has_distinct_lengths())
}
