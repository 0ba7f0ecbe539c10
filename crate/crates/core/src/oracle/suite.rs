use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::delta::{enumerate_cycle_types, DeltaOracle};
use super::identities::{
    monotone_probabilities, parity_probabilities, parity_probabilities_dp,
    verify_monotone_identity, verify_parity_identity, verify_ratio_proposition, verify_shift_ratio,
};
use super::permutations::brute_force_cycle_types;
use super::rational::enumerate_cycle_types_exact;
use super::DELTA_CAP;
use crate::chain::ChainSampler;
use crate::exact::{num_cycles_pmf, ExactModel, LambdaTable};
use crate::{Error, ModelParams, Result};

/// One family of checks run by [`verify_all`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub cases: usize,
    pub violations: usize,
    /// Largest observed error in the check's own measure.
    pub max_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub max_n: usize,
    pub thetas: Vec<f64>,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn violations(&self) -> usize {
        self.checks.iter().map(|c| c.violations).sum()
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }
}

struct Tally {
    inner: CheckResult,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            inner: CheckResult {
                name: name.into(),
                cases: 0,
                violations: 0,
                max_error: 0.0,
            },
        }
    }

    fn close(&mut self, a: f64, b: f64, rel: f64) {
        let err = (a - b).abs();
        let scale = a.abs().max(b.abs());
        self.inner.cases += 1;
        self.inner.max_error =
            self.inner
                .max_error
                .max(if scale > 0.0 { err / scale } else { 0.0 });
        let within = err <= rel * scale + 1e-15;
        if !within {
            self.inner.violations += 1;
        }
    }

    fn truth(&mut self, ok: bool) {
        self.inner.cases += 1;
        if !ok {
            self.inner.violations += 1;
        }
    }

    fn absorb(&mut self, cases: usize, violations: usize, err: f64) {
        self.inner.cases += cases;
        self.inner.violations += violations;
        self.inner.max_error = self.inner.max_error.max(err);
    }
}

fn params(n: usize, theta: f64) -> ModelParams {
    ModelParams::new(n, theta).expect("validated up front")
}

/// Runs every oracle cross-check for `2 ≤ n ≤ max_n` (each family stops at its
/// own cap) and each θ.
pub fn verify_all(max_n: usize, thetas: &[f64]) -> Result<VerifyReport> {
    if max_n < 2 {
        return Err(Error::InvalidParams(format!("max_n = {max_n} < 2")));
    }
    if thetas.is_empty() {
        return Err(Error::InvalidParams("no theta values".into()));
    }
    for &t in thetas {
        ModelParams::new(2, t)?;
    }
    let cap = |c: usize| max_n.min(c);
    let mut checks = Vec::new();

    let mut t = Tally::new("lambda: enumeration vs recurrence");
    for &theta in thetas {
        let table = LambdaTable::new(theta, cap(DELTA_CAP))?;
        for n in 2..=cap(DELTA_CAP) {
            t.close(DeltaOracle::new(n, theta)?.lambda(), table[n], 1e-10);
        }
    }
    checks.push(t.inner);

    let mut t = Tally::new("eta pmf: xi product vs chain transitions");
    for &theta in thetas {
        for n in 2..=cap(16) {
            let o = DeltaOracle::new(n, theta)?;
            let chain = ChainSampler::new(params(n, theta));
            for m in o.members() {
                t.close(m.weight, chain.path_probability(&m.outcome), 1e-12);
            }
        }
    }
    checks.push(t.inner);

    let mut t = Tally::new("cycle types: enumeration vs exact formulas");
    for &theta in thetas {
        for n in 2..=cap(12) {
            let p = params(n, theta);
            let model = ExactModel::new(p);
            let types = enumerate_cycle_types(p)?;
            let o = DeltaOracle::new(n, theta)?.cycle_type_pmf();
            for ct in &types {
                t.close(o[&ct.outcome], ct.weight, 1e-10);
            }
            for j in 2..=n {
                for r in 0..=n / j {
                    let want: f64 = types
                        .iter()
                        .filter(|c| c.outcome.count(j) == r)
                        .map(|c| c.weight)
                        .sum();
                    t.close(model.cycle_count_pmf(j, r)?, want, 1e-10);
                }
            }
            for k in 1..=n / 2 {
                let want: f64 = types
                    .iter()
                    .filter(|c| c.outcome.num_cycles() == k)
                    .map(|c| c.weight)
                    .sum();
                t.close(num_cycles_pmf(p, k)?, want, 1e-10);
            }
        }
    }
    checks.push(t.inner);

    let mut t = Tally::new("cycle types: brute-force permutations and exact rationals");
    for &theta in thetas {
        let q = BigRational::from_float(theta).expect("finite theta");
        for n in 2..=cap(10) {
            let types = enumerate_cycle_types(params(n, theta))?;
            let exact = enumerate_cycle_types_exact(n, &q)?;
            for (ct, w) in &exact {
                let f = types
                    .iter()
                    .find(|c| &c.outcome == ct)
                    .map_or(f64::NAN, |c| c.weight);
                t.close(f, w.to_f64().unwrap_or(f64::NAN), 1e-12);
            }
            if n <= 8 {
                for b in brute_force_cycle_types(params(n, theta))? {
                    let f = types
                        .iter()
                        .find(|c| c.outcome == b.outcome)
                        .map_or(f64::NAN, |c| c.weight);
                    t.close(b.weight, f, 1e-12);
                }
            }
        }
    }
    checks.push(t.inner);

    let mut t = Tally::new("shift ratio (i-1)/(i-2)");
    for &theta in thetas {
        for n in 5..=cap(20) {
            let r = verify_shift_ratio(n, theta)?;
            t.absorb(r.checked, r.violations, r.max_rel_error);
        }
    }
    checks.push(t.inner);

    let mut t = Tally::new("equal-|r| ratio is a theta-free product");
    for n in 2..=cap(18) {
        let r = verify_ratio_proposition(n, thetas)?;
        t.absorb(
            r.pairs_checked,
            r.violations,
            r.max_rel_error.max(r.max_theta_spread),
        );
    }
    checks.push(t.inner);

    let mut t = Tally::new("parity: identity, alpha < beta, DP agreement");
    for &theta in thetas {
        for n in 2..=cap(24) {
            let p = params(n, theta);
            let (a, b) = parity_probabilities(p)?;
            let (da, db) = parity_probabilities_dp(p)?;
            t.close(a, da, 1e-10);
            t.close(b, db, 1e-10);
            if n % 2 == 1 {
                t.truth(b == 0.0);
            } else {
                let r = verify_parity_identity(p)?;
                t.absorb(1, r.violations, 0.0);
                t.close(r.lhs, r.rhs, 1e-10);
            }
        }
    }
    checks.push(t.inner);

    let mut t = Tally::new("monotone: reversal identity and ordering");
    for &theta in thetas {
        for n in 2..=cap(DELTA_CAP) {
            let p = params(n, theta);
            let (dec, inc) = monotone_probabilities(p)?;
            if n <= 4 {
                t.truth((dec - 1.0).abs() < 1e-12 && (inc - 1.0).abs() < 1e-12);
            } else {
                t.truth(dec > inc);
            }
            let r = verify_monotone_identity(p)?;
            t.absorb(1, r.violations, 0.0);
            t.close(r.lhs, r.rhs, 1e-10);
        }
    }
    checks.push(t.inner);

    Ok(VerifyReport {
        max_n,
        thetas: thetas.to_vec(),
        checks,
    })
}
