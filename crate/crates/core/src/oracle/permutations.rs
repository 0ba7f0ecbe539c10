use std::collections::BTreeMap;

use super::delta::WeightedOutcome;
use super::PERMUTATION_CAP;
use crate::exact::CycleType;
use crate::{Error, ModelParams, Result};

/// Calls `f` on every permutation of `0..n` (Heap's algorithm, 0-based images).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn cycle_lengths(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out
}

/// Cycle-type law obtained by walking all `n!` permutations, discarding those
/// with a fixed point and weighting the rest by `θ^k`. Slow on purpose.
pub fn brute_force_cycle_types(params: ModelParams) -> Result<Vec<WeightedOutcome<CycleType>>> {
    let n = params.n();
    if n > PERMUTATION_CAP {
        return Err(Error::AboveCap {
            n,
            cap: PERMUTATION_CAP,
        });
    }
    let theta = params.theta();
    let mut acc: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for_each_permutation(n, |perm| {
        if perm.iter().enumerate().any(|(i, &p)| i == p) {
            return;
        }
        let mut lengths = cycle_lengths(perm);
        lengths.sort_unstable();
        *acc.entry(lengths.clone()).or_insert(0.0) += theta.powi(lengths.len() as i32);
    });
    let total: f64 = acc.values().sum();
    Ok(acc
        .into_iter()
        .map(|(lengths, w)| WeightedOutcome {
            outcome: CycleType::from_lengths(&lengths).expect("derangement"),
            weight: w / total,
        })
        .collect())
}
