use std::collections::{BTreeMap, HashMap};

use super::{CYCLE_TYPE_CAP, DELTA_CAP};
use crate::chain::{EtaSequence, OrderedCycleLengths};
use crate::exact::{ln_factorial, CycleType};
use crate::params::check_theta;
use crate::{Error, ModelParams, Result};

/// An enumerated outcome with its probability.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedOutcome<T> {
    pub outcome: T,
    pub weight: f64,
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::AboveCap { n, cap })
    } else {
        Ok(())
    }
}

/// Partitions of `n` into parts `≥ 2`, parts in non-increasing order.
fn partitions_min2(n: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (2..=max.min(left)).rev() {
            cur.push(part);
            rec(left - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Every derangement cycle type of size `n` with its ESF(θ) probability,
/// proportional to `∏_{j≥2} (θ/j)^{c_j} / c_j!` and normalised by the
/// enumerated total.
pub fn enumerate_cycle_types(params: ModelParams) -> Result<Vec<WeightedOutcome<CycleType>>> {
    let n = params.n();
    check_cap(n, CYCLE_TYPE_CAP)?;
    let theta = params.theta();
    let mut out: Vec<WeightedOutcome<CycleType>> = partitions_min2(n)
        .into_iter()
        .map(|parts| {
            let ct = CycleType::from_lengths(&parts).expect("parts >= 2");
            let ln_w: f64 = ct
                .counts()
                .iter()
                .map(|(&j, &c)| c as f64 * (theta / j as f64).ln() - ln_factorial(c))
                .sum();
            WeightedOutcome {
                outcome: ct,
                weight: ln_w.exp(),
            }
        })
        .collect();
    let total: f64 = out.iter().map(|o| o.weight).sum();
    for o in &mut out {
        o.weight /= total;
    }
    Ok(out)
}

/// All members of `Δ_n`, i.e. all compositions of `n` into parts `≥ 2`.
pub fn enumerate_delta(n: usize) -> Result<Vec<EtaSequence>> {
    check_cap(n, DELTA_CAP)?;
    if n < 2 {
        return Ok(Vec::new());
    }
    fn rec(left: usize, cur: &mut Vec<usize>, out: &mut Vec<EtaSequence>) {
        if left == 0 {
            let l = OrderedCycleLengths::new(cur.clone()).expect("parts >= 2");
            out.push(EtaSequence::from_lengths(&l));
            return;
        }
        for part in 2..=left {
            if left - part == 1 {
                continue;
            }
            cur.push(part);
            rec(left - part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut out);
    Ok(out)
}

/// `∏_{i=2}^n P(ξ_i = r_i)` with `P(ξ_i = 1) = θ/(θ+i−1)`; `ξ_1 = 1` surely.
pub fn xi_path_weight(eta: &EtaSequence, theta: f64) -> f64 {
    (2..=eta.n())
        .map(|i| {
            let denom = theta + i as f64 - 1.0;
            if eta.at(i) == 1 {
                theta / denom
            } else {
                (i as f64 - 1.0) / denom
            }
        })
        .product()
}

/// `Δ_n` with the law of the η chain, computed as the ξ law conditioned on
/// landing in `Δ_n`. The normaliser is the enumerated total, so `λ_n(θ)` comes
/// out as a by-product rather than an input.
#[derive(Debug, Clone)]
pub struct DeltaOracle {
    n: usize,
    theta: f64,
    lambda: f64,
    members: Vec<WeightedOutcome<EtaSequence>>,
}

impl DeltaOracle {
    pub fn new(n: usize, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        let raw: Vec<_> = enumerate_delta(n)?
            .into_iter()
            .map(|eta| {
                let w = xi_path_weight(&eta, theta);
                WeightedOutcome {
                    outcome: eta,
                    weight: w,
                }
            })
            .collect();
        let lambda: f64 = raw.iter().map(|o| o.weight).sum();
        let members = raw
            .into_iter()
            .map(|o| WeightedOutcome {
                weight: o.weight / lambda,
                ..o
            })
            .collect();
        Ok(DeltaOracle {
            n,
            theta,
            lambda,
            members,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `P(ξ ∈ Δ_n) = λ_n(θ)`, summed over the enumeration.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn members(&self) -> &[WeightedOutcome<EtaSequence>] {
        &self.members
    }

    /// `P(η = eta) = λ_n^{-1} ∏ P(ξ_i = r_i)`.
    pub fn pmf(&self, eta: &EtaSequence) -> Result<f64> {
        if eta.n() != self.n {
            return Err(Error::InvalidEta(format!(
                "length {} but oracle is for n = {}",
                eta.n(),
                self.n
            )));
        }
        Ok(xi_path_weight(eta, self.theta) / self.lambda)
    }

    /// Probability of an event over `Δ_n`.
    pub fn probability(&self, event: impl Fn(&EtaSequence) -> bool) -> f64 {
        self.members
            .iter()
            .filter(|o| event(&o.outcome))
            .map(|o| o.weight)
            .sum()
    }

    /// Aggregates the path law by unordered cycle type.
    pub fn cycle_type_pmf(&self) -> BTreeMap<CycleType, f64> {
        let mut out = BTreeMap::new();
        for o in &self.members {
            *out.entry(o.outcome.lengths().cycle_type()).or_insert(0.0) += o.weight;
        }
        out
    }

    /// Law of the ordered cycle lengths, keyed by the length vector.
    pub fn ordered_pmf(&self) -> HashMap<Vec<usize>, f64> {
        self.members
            .iter()
            .map(|o| (o.outcome.lengths().into_vec(), o.weight))
            .collect()
    }
}

/// `Σ_{r∈Δ_n} ∏ P(ξ_i = r_i)`, summed over the compositions by the position
/// of the next 1 rather than member by member.
fn delta_mass(n: usize, theta: f64) -> f64 {
    let one = |i: usize| {
        if i < 2 {
            1.0
        } else {
            theta / (theta + i as f64 - 1.0)
        }
    };
    let zero = |i: usize| (i as f64 - 1.0) / (theta + i as f64 - 1.0);
    // below[s]: mass of positions s−1, …, 1 given a 1 at position s
    let mut below = vec![0.0f64; n + 2];
    below[1] = 1.0;
    for s in 3..=n + 1 {
        let mut gap = 1.0;
        let mut total = 0.0;
        for t in (1..s - 1).rev() {
            gap *= zero(t + 1);
            total += gap * one(t) * below[t];
        }
        below[s] = total;
    }
    below[n + 1]
}

/// `P(η = eta)` for a single sequence.
pub fn exact_eta_pmf(eta: &EtaSequence, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    Ok(xi_path_weight(eta, theta) / delta_mass(eta.n(), theta))
}
