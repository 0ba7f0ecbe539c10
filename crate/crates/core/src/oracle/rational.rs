use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::CYCLE_TYPE_CAP;
use crate::exact::CycleType;
use crate::{Error, Result};

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

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

/// Cycle-type law in exact arithmetic for rational θ.
pub fn enumerate_cycle_types_exact(
    n: usize,
    theta: &BigRational,
) -> Result<Vec<(CycleType, BigRational)>> {
    if n > CYCLE_TYPE_CAP {
        return Err(Error::AboveCap {
            n,
            cap: CYCLE_TYPE_CAP,
        });
    }
    if n < 2 {
        return Err(Error::InvalidParams(format!("n = {n} < 2")));
    }
    if *theta <= BigRational::zero() {
        return Err(Error::InvalidParams(format!(
            "theta = {theta} must be positive"
        )));
    }
    let mut out: Vec<(CycleType, BigRational)> = partitions_min2(n)
        .into_iter()
        .map(|parts| {
            let ct = CycleType::from_lengths(&parts).expect("parts >= 2");
            let mut w = BigRational::one();
            for (&j, &c) in ct.counts() {
                let base = theta / BigRational::from_integer(BigInt::from(j));
                w *= num_traits::pow(base, c);
                w /= BigRational::from_integer(factorial(c));
            }
            (ct, w)
        })
        .collect();
    let total = out.iter().fold(BigRational::zero(), |acc, (_, w)| acc + w);
    for (_, w) in &mut out {
        *w = &*w / &total;
    }
    Ok(out)
}

/// `P(C_j = r)` in exact arithmetic.
pub fn cycle_count_pmf_exact(
    n: usize,
    theta: &BigRational,
    j: usize,
    r: usize,
) -> Result<BigRational> {
    Ok(enumerate_cycle_types_exact(n, theta)?
        .into_iter()
        .filter(|(ct, _)| ct.count(j) == r)
        .fold(BigRational::zero(), |acc, (_, w)| acc + w))
}
