use serde::{Deserialize, Serialize};
use std::time::Instant;

use super::statistic::{Method, Statistic};
use super::DEFAULT_WORKERS;
use crate::chain::{DrawStats, RngStream, Sampler, DEFAULT_MAX_DRAWS};
use crate::{Error, ModelParams, Result};

/// A Monte Carlo estimate with its normal-approximation standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub statistic: Statistic,
    pub method: Method,
    pub n: usize,
    pub theta: f64,
    pub point: f64,
    pub std_error: f64,
    pub reps: usize,
    pub seed: u64,
    pub workers: usize,
    /// Candidates generated, including rejected ones.
    pub attempts: u64,
    pub wall_seconds: f64,
}

/// Share of `reps` given to worker `w`.
fn share(reps: usize, workers: usize, w: usize) -> usize {
    reps / workers + usize::from(w < reps % workers)
}

/// Draws `reps` samples over `workers` streams and folds each sample's ordered
/// cycle lengths into a per-worker accumulator. Accumulators come back in
/// worker order, together with the summed work counters.
///
/// The whole batch may spend at most [`DEFAULT_MAX_DRAWS`] variates, shared
/// between workers in proportion to their reps.
pub fn simulate_lengths<A, I, V>(
    params: ModelParams,
    method: Method,
    reps: usize,
    seed: u64,
    workers: usize,
    init: I,
    visit: V,
) -> Result<(Vec<A>, DrawStats)>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &[usize]) + Sync,
{
    simulate_lengths_with_budget(
        params,
        method,
        reps,
        seed,
        workers,
        DEFAULT_MAX_DRAWS,
        init,
        visit,
    )
}

/// [`simulate_lengths`] with an explicit batch budget of variates.
#[allow(clippy::too_many_arguments)]
pub fn simulate_lengths_with_budget<A, I, V>(
    params: ModelParams,
    method: Method,
    reps: usize,
    seed: u64,
    workers: usize,
    max_draws: u64,
    init: I,
    visit: V,
) -> Result<(Vec<A>, DrawStats)>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &[usize]) + Sync,
{
    if workers == 0 {
        return Err(Error::InvalidParams("workers must be positive".into()));
    }
    let sampler = method.sampler_with_max_draws(params, max_draws)?;
    let sampler: &dyn Sampler = sampler.as_ref();
    let results: Vec<Result<(A, DrawStats)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let (init, visit) = (&init, &visit);
                scope.spawn(move || {
                    let mut rng = RngStream::new(seed, w as u64);
                    let mut acc = init();
                    let mut lengths = Vec::with_capacity(params.n() / 2);
                    let mut stats = DrawStats::default();
                    let mine = share(reps, workers, w);
                    let budget =
                        (max_draws as u128 * mine as u128).div_ceil(reps.max(1) as u128) as u64;
                    for _ in 0..mine {
                        stats += sampler.draw_into(&mut rng, &mut lengths)?;
                        if stats.draws > budget {
                            return Err(Error::AttemptsExhausted {
                                attempts: stats.attempts,
                                draws: stats.draws,
                            });
                        }
                        visit(&mut acc, &lengths);
                    }
                    Ok((acc, stats))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut accs = Vec::with_capacity(workers);
    let mut total = DrawStats::default();
    for r in results {
        let (acc, stats) = r?;
        accs.push(acc);
        total += stats;
    }
    Ok((accs, total))
}

/// Estimates several statistics from the same samples.
pub fn estimate_many(
    statistics: &[Statistic],
    params: ModelParams,
    method: Method,
    reps: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<EstimateResult>> {
    if reps == 0 {
        return Err(Error::InvalidParams("reps must be positive".into()));
    }
    let start = Instant::now();
    let k = statistics.len();
    let (accs, stats) = simulate_lengths(
        params,
        method,
        reps,
        seed,
        workers,
        || vec![(0.0f64, 0.0f64); k],
        |acc, lengths| {
            for (slot, s) in acc.iter_mut().zip(statistics) {
                let v = s.evaluate(lengths);
                slot.0 += v;
                slot.1 += v * v;
            }
        },
    )?;
    let wall_seconds = start.elapsed().as_secs_f64();
    let r = reps as f64;
    Ok(statistics
        .iter()
        .enumerate()
        .map(|(i, &statistic)| {
            let (sum, sumsq) = accs
                .iter()
                .fold((0.0, 0.0), |(a, b), acc| (a + acc[i].0, b + acc[i].1));
            let point = sum / r;
            let std_error = if statistic.is_probability() {
                (point * (1.0 - point) / r).sqrt()
            } else if reps > 1 {
                ((sumsq - r * point * point).max(0.0) / (r - 1.0) / r).sqrt()
            } else {
                0.0
            };
            EstimateResult {
                statistic,
                method,
                n: params.n(),
                theta: params.theta(),
                point,
                std_error,
                reps,
                seed,
                workers,
                attempts: stats.attempts,
                wall_seconds,
            }
        })
        .collect())
}

pub fn estimate_with_workers(
    statistic: Statistic,
    params: ModelParams,
    method: Method,
    reps: usize,
    seed: u64,
    workers: usize,
) -> Result<EstimateResult> {
    Ok(estimate_many(&[statistic], params, method, reps, seed, workers)?.remove(0))
}

/// Monte Carlo estimate of one statistic with the default worker count.
///
/// ```
/// use derange::harness::{estimate, Method, Statistic};
/// use derange::ModelParams;
///
/// let p = ModelParams::new(10, 1.0)?;
/// let e = estimate(Statistic::SingleCycle, p, Method::Chain, 20_000, 1)?;
/// assert!((e.point - 0.272).abs() < 4.0 * e.std_error + 1e-3);
/// # Ok::<(), derange::Error>(())
/// ```
pub fn estimate(
    statistic: Statistic,
    params: ModelParams,
    method: Method,
    reps: usize,
    seed: u64,
) -> Result<EstimateResult> {
    estimate_with_workers(statistic, params, method, reps, seed, DEFAULT_WORKERS)
}

/// Empirical acceptance rate of a method, from `accepted` accepted samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceEstimate {
    pub method: Method,
    pub n: usize,
    pub theta: f64,
    pub accepted: usize,
    pub attempts: u64,
    pub rate: f64,
    /// Delta-method error of `accepted/attempts` at a fixed accepted count.
    pub std_error: f64,
    pub wall_seconds: f64,
}

pub fn estimate_acceptance(
    params: ModelParams,
    method: Method,
    accepted: usize,
    seed: u64,
    workers: usize,
) -> Result<AcceptanceEstimate> {
    if accepted == 0 {
        return Err(Error::InvalidParams("accepted must be positive".into()));
    }
    let start = Instant::now();
    let (_, stats) = simulate_lengths(params, method, accepted, seed, workers, || (), |_, _| {})?;
    let wall_seconds = start.elapsed().as_secs_f64();
    let rate = accepted as f64 / stats.attempts as f64;
    Ok(AcceptanceEstimate {
        method,
        n: params.n(),
        theta: params.theta(),
        accepted,
        attempts: stats.attempts,
        rate,
        std_error: rate * ((1.0 - rate) / accepted as f64).sqrt(),
        wall_seconds,
    })
}
