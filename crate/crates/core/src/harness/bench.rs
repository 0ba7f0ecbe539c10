use serde::Serialize;
use std::time::Instant;

use super::statistic::Method;
use crate::chain::RngStream;
use crate::{ModelParams, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkRow {
    pub method: Method,
    pub n: usize,
    pub theta: f64,
    /// Median over repeats of wall-clock seconds per accepted sample.
    pub seconds_per_sample: f64,
    pub attempts_per_sample: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkReport {
    pub rows: Vec<BenchmarkRow>,
}

impl BenchmarkReport {
    /// `(max − min)/min` of the per-sample time of `method` over θ at fixed `n`.
    pub fn theta_spread(&self, method: Method, n: usize) -> Option<f64> {
        let times: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.method == method && r.n == n)
            .map(|r| r.seconds_per_sample)
            .collect();
        let min = times.iter().copied().fold(f64::INFINITY, f64::min);
        let max = times.iter().copied().fold(0.0, f64::max);
        (times.len() >= 2).then(|| (max - min) / min)
    }

    pub fn row(&self, method: Method, n: usize, theta: f64) -> Option<&BenchmarkRow> {
        self.rows
            .iter()
            .find(|r| r.method == method && r.n == n && r.theta == theta)
    }
}

const REPEATS: usize = 5;

/// Single-threaded timing of each method on each grid cell: `reps` accepted
/// samples per repeat, median of five repeats after one warm-up.
pub fn benchmark_methods(
    grid: &[(usize, f64)],
    methods: &[Method],
    reps: usize,
    seed: u64,
) -> Result<BenchmarkReport> {
    let mut rows = Vec::new();
    for &method in methods {
        for &(n, theta) in grid {
            let sampler = method.sampler(ModelParams::new(n, theta)?)?;
            let mut rng = RngStream::new(seed, 0);
            let mut lengths = Vec::new();
            let mut run = || -> Result<(f64, u64)> {
                let start = Instant::now();
                let mut attempts = 0;
                for _ in 0..reps {
                    attempts += sampler.draw_into(&mut rng, &mut lengths)?.attempts;
                }
                Ok((start.elapsed().as_secs_f64(), attempts))
            };
            run()?;
            let mut times = Vec::with_capacity(REPEATS);
            let mut attempts = 0;
            for _ in 0..REPEATS {
                let (t, a) = run()?;
                times.push(t);
                attempts += a;
            }
            times.sort_by(f64::total_cmp);
            rows.push(BenchmarkRow {
                method,
                n,
                theta,
                seconds_per_sample: times[REPEATS / 2] / reps as f64,
                attempts_per_sample: attempts as f64 / (REPEATS * reps) as f64,
            });
        }
    }
    Ok(BenchmarkReport { rows })
}
