use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

/// Rows `0..=n` of the unsigned Stirling numbers of the first kind,
/// `[n, k] = [n−1, k−1] + (n−1)[n−1, k]`.
pub fn stirling_first_triangle(n: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n + 1);
    rows.push(vec![BigUint::one()]);
    for m in 1..=n {
        let prev = &rows[m - 1];
        let mut row = vec![BigUint::zero(); m + 1];
        for k in 1..=m {
            let mut v = prev[k - 1].clone();
            if k < m {
                v += &prev[k] * BigUint::from(m - 1);
            }
            row[k] = v;
        }
        rows.push(row);
    }
    rows
}

/// Number of permutations of `n` with exactly `k` cycles. Zero when `k > n`.
pub fn stirling_first_unsigned(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    stirling_first_triangle(n).swap_remove(n).swap_remove(k)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= BigUint::from(n - i);
        acc /= BigUint::from(i + 1);
    }
    acc
}

/// `D_n` from `D_n = (n−1)(D_{n−1} + D_{n−2})`, `D_0 = 1`, `D_1 = 0`.
pub fn derangement_number(n: usize) -> BigUint {
    let (mut a, mut b) = (BigUint::one(), BigUint::zero());
    if n == 0 {
        return a;
    }
    for m in 2..=n {
        let next = BigUint::from(m - 1) * (&a + &b);
        a = b;
        b = next;
    }
    b
}

/// `D(n, k)` for every `k` in `0..=n`, via
/// `D(n, k) = Σ_l (−1)^l C(n, l) [n−l, k−l]`.
pub fn derangement_cycle_counts(n: usize) -> Vec<BigUint> {
    let stirling = stirling_first_triangle(n);
    let binoms: Vec<BigInt> = (0..=n).map(|l| BigInt::from(binomial(n, l))).collect();
    (0..=n)
        .map(|k| {
            let mut acc = BigInt::zero();
            for l in 0..=k {
                let term = &binoms[l] * BigInt::from(stirling[n - l][k - l].clone());
                if l % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc.to_biguint()
                .expect("derangement counts are non-negative")
        })
        .collect()
}

/// Number of derangements of `n` having exactly `k` cycles; zero for `k` outside
/// `1..=n/2` when `n ≥ 2`.
pub fn derangement_cycle_count(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    derangement_cycle_counts(n).swap_remove(k)
}

/// Natural log of a big integer; `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit prefix");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}
