use serde::Serialize;

use super::delta::{enumerate_delta, DeltaOracle};
use super::{DELTA_CAP, PARITY_DP_CAP};
use crate::chain::{ChainSampler, EtaSequence};
use crate::{Error, ModelParams, Result};

const REL_TOL: f64 = 1e-10;

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::AboveCap { n, cap })
    } else {
        Ok(())
    }
}

/// `S_i` applied to one sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShiftResult {
    pub source: EtaSequence,
    pub target: EtaSequence,
    pub position: usize,
}

impl ShiftResult {
    /// True when `S_i` left the sequence unchanged.
    pub fn is_identity(&self) -> bool {
        self.source == self.target
    }
}

/// Shift operator `S_i`, `4 ≤ i ≤ n − 1`: moves the 1 at position `i` to
/// `i − 1` when `r_i = 1` and `r_{i−2} = 0`, and is the identity otherwise.
pub fn shift(eta: &EtaSequence, i: usize) -> Result<ShiftResult> {
    let n = eta.n();
    if i < 4 || i + 1 > n {
        return Err(Error::InvalidParams(format!(
            "shift position {i} outside 4..={}",
            n.saturating_sub(1)
        )));
    }
    Ok(ShiftResult {
        source: eta.clone(),
        target: eta.shifted(i),
        position: i,
    })
}

/// Outcome of checking `P(S_i r)/P(r) = (i−1)/(i−2)` over `Δ_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftReport {
    pub n: usize,
    pub theta: f64,
    /// `(r, i)` pairs where the shift moved a 1.
    pub checked: usize,
    /// `(r, i)` pairs where `S_i` was the identity.
    pub identity_cases: usize,
    pub violations: usize,
    pub max_rel_error: f64,
}

/// For every `r ∈ Δ_n` and `4 ≤ i ≤ n − 1` with a non-trivial shift, compares
/// the oracle ratio, the chain's path-probability ratio and the
/// transition-row form `p_i q_{i−1} / (p_{i−2} q_i)` against `(i−1)/(i−2)`.
pub fn verify_shift_ratio(n: usize, theta: f64) -> Result<ShiftReport> {
    check_cap(n, 20)?;
    let oracle = DeltaOracle::new(n, theta)?;
    let chain = ChainSampler::new(ModelParams::new(n, theta)?);
    let emit = chain.emit_probabilities();
    let p = |i: usize| 1.0 - emit[i];
    let q = |i: usize| emit[i];
    let mut report = ShiftReport {
        n,
        theta,
        checked: 0,
        identity_cases: 0,
        violations: 0,
        max_rel_error: 0.0,
    };
    for m in oracle.members() {
        for i in 4..n {
            let s = shift(&m.outcome, i)?;
            if s.is_identity() {
                report.identity_cases += 1;
                continue;
            }
            let expected = (i as f64 - 1.0) / (i as f64 - 2.0);
            let via_oracle = oracle.pmf(&s.target)? / m.weight;
            let via_chain = chain.path_probability(&s.target) / chain.path_probability(&s.source);
            let via_rows = p(i) * q(i - 1) / (p(i - 2) * q(i));
            let err = [via_oracle, via_chain, via_rows]
                .into_iter()
                .map(|r| rel_err(r, expected))
                .fold(0.0, f64::max);
            let in_delta = EtaSequence::new(s.target.bits().to_vec()).is_ok()
                && s.target.ones() == s.source.ones();
            report.max_rel_error = report.max_rel_error.max(err);
            if err > REL_TOL || !in_delta {
                report.violations += 1;
            }
            report.checked += 1;
        }
    }
    Ok(report)
}

/// Outcome of checking the θ-free ratio between sequences with equal `|r|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropositionReport {
    pub n: usize,
    pub thetas: Vec<f64>,
    pub pairs_checked: usize,
    pub violations: usize,
    pub max_rel_error: f64,
    /// Largest spread of the same pmf ratio across the supplied θ values.
    pub max_theta_spread: f64,
}

/// `∏_{j=1}^{b−1} (σ_j(r') − 1)/(σ_j(r) − 1)` for `|r| = |r'| = b`.
pub(crate) fn proposition_ratio(r: &EtaSequence, r_prime: &EtaSequence) -> f64 {
    let s = r.sigma();
    let t = r_prime.sigma();
    debug_assert_eq!(s.len(), t.len());
    let b = s.len() - 1;
    (1..b)
        .map(|j| (t[j] as f64 - 1.0) / (s[j] as f64 - 1.0))
        .product()
}

/// For all pairs `r, r' ∈ Δ_n` with `|r| = |r'|`, checks
/// `P(η = r)/P(η = r') = ∏ (σ_j(r')−1)/(σ_j(r)−1)` at every θ, and that the
/// ratio is the same for every θ.
pub fn verify_ratio_proposition(n: usize, thetas: &[f64]) -> Result<PropositionReport> {
    check_cap(n, 18)?;
    let oracles = thetas
        .iter()
        .map(|&t| DeltaOracle::new(n, t))
        .collect::<Result<Vec<_>>>()?;
    let members = enumerate_delta(n)?;
    let mut by_ones: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (k, m) in members.iter().enumerate() {
        by_ones[m.ones()].push(k);
    }
    let mut report = PropositionReport {
        n,
        thetas: thetas.to_vec(),
        pairs_checked: 0,
        violations: 0,
        max_rel_error: 0.0,
        max_theta_spread: 0.0,
    };
    for group in by_ones.iter().filter(|g| !g.is_empty()) {
        for &a in group {
            for &b in group {
                let (r, rp) = (&members[a], &members[b]);
                let expected = proposition_ratio(r, rp);
                let ratios: Vec<f64> = oracles
                    .iter()
                    .map(|o| o.members()[a].weight / o.members()[b].weight)
                    .collect();
                let err = ratios
                    .iter()
                    .map(|&x| rel_err(x, expected))
                    .fold(0.0, f64::max);
                let spread = ratios
                    .iter()
                    .map(|&x| rel_err(x, ratios[0]))
                    .fold(0.0, f64::max);
                report.max_rel_error = report.max_rel_error.max(err);
                report.max_theta_spread = report.max_theta_spread.max(spread);
                if err > REL_TOL || spread > REL_TOL {
                    report.violations += 1;
                }
                report.pairs_checked += 1;
            }
        }
    }
    Ok(report)
}

/// Sum over compositions of `n` whose parts all satisfy `allowed`, weighting a
/// composition by `∏ θ/(σ_j − 1)` over its interior boundaries. This is the
/// ξ-product up to a factor that does not depend on the composition.
fn suffix_weight(n: usize, theta: f64, allowed: impl Fn(usize) -> bool) -> f64 {
    // g[m]: weight of covering positions m..1 when the boundary above is a 1
    let mut g = vec![0.0; n + 1];
    for m in 2..=n {
        let mut w = 0.0;
        for a in (2..=m).filter(|&a| allowed(a)) {
            let rest = m - a;
            if rest == 0 {
                w += 1.0;
            } else if rest >= 2 {
                w += theta / rest as f64 * g[rest];
            }
        }
        g[m] = w;
    }
    g[n]
}

/// `(α_n, β_n)` by an `O(n²)` dynamic programme over the last boundary;
/// valid to `n = 200`.
pub fn parity_probabilities_dp(params: ModelParams) -> Result<(f64, f64)> {
    let n = params.n();
    check_cap(n, PARITY_DP_CAP)?;
    let theta = params.theta();
    let all = suffix_weight(n, theta, |_| true);
    let odd = suffix_weight(n, theta, |a| a % 2 == 1);
    let even = suffix_weight(n, theta, |a| a % 2 == 0);
    Ok((odd / all, even / all))
}

/// `α_n = P(all cycle lengths odd)` and `β_n = P(all even)`. Exhaustive over
/// `Δ_n` up to `n = 25`, dynamic programming up to `n = 200`.
pub fn parity_probabilities(params: ModelParams) -> Result<(f64, f64)> {
    if params.n() > DELTA_CAP {
        return parity_probabilities_dp(params);
    }
    let o = DeltaOracle::new(params.n(), params.theta())?;
    let alpha = o.probability(|e| e.lengths().as_slice().iter().all(|a| a % 2 == 1));
    let beta = o.probability(|e| e.lengths().as_slice().iter().all(|a| a % 2 == 0));
    Ok((alpha, beta))
}

/// Exact probabilities that the ordered lengths are weakly decreasing and
/// weakly increasing.
pub fn monotone_probabilities(params: ModelParams) -> Result<(f64, f64)> {
    let o = DeltaOracle::new(params.n(), params.theta())?;
    Ok((
        o.probability(|e| e.lengths().is_weakly_decreasing()),
        o.probability(|e| e.lengths().is_weakly_increasing()),
    ))
}

/// Both sides of an exact identity, plus the structural checks behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub n: usize,
    pub theta: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// Structural failures: broken bijections, failed strict inequalities.
    pub violations: usize,
}

impl IdentityReport {
    pub fn abs_error(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.violations == 0 && self.abs_error() <= tol
    }
}

fn all_parts(e: &EtaSequence, pred: impl Fn(usize) -> bool) -> bool {
    e.lengths().as_slice().iter().all(|&a| pred(a))
}

/// Some odd-numbered cycle (1st, 3rd, …) has length 2.
fn in_e_prime(e: &EtaSequence) -> bool {
    all_parts(e, |a| a % 2 == 0) && e.lengths().as_slice().iter().step_by(2).any(|&a| a == 2)
}

/// The parity identity for even `n`:
/// `β_n − P(E′, K even) − P(E, K odd) = Σ_{r∈O_n} ∏_i (σ_{2i+1}−1)/(σ_{2i+1}−2) P(r)`.
///
/// Also checks that shifting the 1s at `σ_1, σ_3, …` maps `O_{n,2l}` one-to-one
/// onto `E_{n,2l} \ E′_{n,2l}` with probability ratio equal to the product, and
/// that `α_n < β_n`.
pub fn verify_parity_identity(params: ModelParams) -> Result<IdentityReport> {
    let n = params.n();
    if n % 2 == 1 {
        return Err(Error::InvalidParams(format!(
            "parity identity needs even n, got {n}"
        )));
    }
    let o = DeltaOracle::new(n, params.theta())?;
    let mut violations = 0;
    let mut beta = 0.0;
    let mut alpha = 0.0;
    let mut excluded = 0.0;
    let mut rhs = 0.0;
    let mut images = Vec::new();
    let mut targets = Vec::new();
    for m in o.members() {
        let e = &m.outcome;
        let even = all_parts(e, |a| a % 2 == 0);
        if even {
            beta += m.weight;
            if e.ones() % 2 == 1 || in_e_prime(e) {
                excluded += m.weight;
            } else {
                targets.push(e.clone());
            }
        }
        if all_parts(e, |a| a % 2 == 1) {
            alpha += m.weight;
            let sigma = e.sigma();
            let mut phi = 1.0;
            let mut image = e.clone();
            for &s in sigma.iter().skip(1).step_by(2).take(e.ones() / 2) {
                phi *= (s as f64 - 1.0) / (s as f64 - 2.0);
                let step = shift(&image, s)?;
                if step.is_identity() {
                    violations += 1;
                }
                image = step.target;
            }
            if rel_err(o.pmf(&image)? / m.weight, phi) > REL_TOL {
                violations += 1;
            }
            rhs += phi * m.weight;
            images.push(image);
        }
    }
    images.sort();
    targets.sort();
    if images != targets {
        violations += 1;
    }
    let ordered = alpha < beta;
    if !ordered {
        violations += 1;
    }
    Ok(IdentityReport {
        n,
        theta: params.theta(),
        lhs: beta - excluded,
        rhs,
        violations,
    })
}

/// The monotone identity:
/// `P(Λ_2) = Σ_{r∈Λ_1} ∏_{i=1}^{|r|−1} (σ_i(r)−1)/(n+1−σ_i(r)) P(r)`.
///
/// Also checks that reversal is an involution on `Δ_n` exchanging `Λ_1` and
/// `Λ_2`, that `P(reversed r) > P(r)` for every non-palindromic `r ∈ Λ_1`
/// when `n ≥ 5`, and that the pmf ratio matches the product.
pub fn verify_monotone_identity(params: ModelParams) -> Result<IdentityReport> {
    let n = params.n();
    let o = DeltaOracle::new(n, params.theta())?;
    let mut violations = 0;
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    for m in o.members() {
        let e = &m.outcome;
        let rev = e.reversed();
        if rev.reversed() != *e || rev.n() != n {
            violations += 1;
        }
        let lengths = e.lengths();
        let (inc, dec) = (
            lengths.is_weakly_increasing(),
            lengths.is_weakly_decreasing(),
        );
        if inc != rev.lengths().is_weakly_decreasing()
            || dec != rev.lengths().is_weakly_increasing()
        {
            violations += 1;
        }
        if dec {
            lhs += m.weight;
        }
        if inc {
            let sigma = e.sigma();
            let factor: f64 = sigma[1..sigma.len() - 1]
                .iter()
                .map(|&s| (s as f64 - 1.0) / (n as f64 + 1.0 - s as f64))
                .product();
            let p_rev = o.pmf(&rev)?;
            if rel_err(p_rev / m.weight, factor) > REL_TOL {
                violations += 1;
            }
            if n >= 5 && rev != *e && p_rev <= m.weight {
                violations += 1;
            }
            rhs += factor * m.weight;
        }
    }
    Ok(IdentityReport {
        n,
        theta: params.theta(),
        lhs,
        rhs,
        violations,
    })
}
