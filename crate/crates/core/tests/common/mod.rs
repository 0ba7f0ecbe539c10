//! Test-side ground truth, written independently of the library.
#![allow(dead_code)]

use std::collections::BTreeMap;

/// Every derangement of `0..n` as (sorted cycle lengths, length of the cycle
/// through 0), generated by plain recursion.
pub fn derangements(n: usize) -> Vec<(Vec<usize>, usize)> {
    fn rec(pos: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = perm.len();
        if pos == n {
            out.push(perm.clone());
            return;
        }
        for v in 0..n {
            if v != pos && !used[v] {
                used[v] = true;
                perm[pos] = v;
                rec(pos + 1, perm, used, out);
                used[v] = false;
            }
        }
    }
    let mut perms = Vec::new();
    rec(0, &mut vec![0; n], &mut vec![false; n], &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let mut seen = vec![false; n];
            let mut lengths = Vec::new();
            let mut through_zero = 0;
            for s in 0..n {
                if seen[s] {
                    continue;
                }
                let mut len = 0;
                let mut x = s;
                while !seen[x] {
                    seen[x] = true;
                    x = p[x];
                    len += 1;
                }
                if s == 0 {
                    through_zero = len;
                }
                lengths.push(len);
            }
            lengths.sort_unstable();
            (lengths, through_zero)
        })
        .collect()
}

/// θ-weighted law over derangements: `E f` with weight `θ^{#cycles}`.
pub struct Weighted {
    items: Vec<(Vec<usize>, usize, f64)>,
}

impl Weighted {
    pub fn new(n: usize, theta: f64) -> Self {
        let raw: Vec<_> = derangements(n)
            .into_iter()
            .map(|(l, z)| {
                let w = theta.powi(l.len() as i32);
                (l, z, w)
            })
            .collect();
        let total: f64 = raw.iter().map(|x| x.2).sum();
        Weighted {
            items: raw.into_iter().map(|(l, z, w)| (l, z, w / total)).collect(),
        }
    }

    pub fn expect(&self, f: impl Fn(&[usize], usize) -> f64) -> f64 {
        self.items.iter().map(|(l, z, w)| w * f(l, *z)).sum()
    }

    pub fn prob(&self, f: impl Fn(&[usize], usize) -> bool) -> f64 {
        self.expect(|l, z| if f(l, z) { 1.0 } else { 0.0 })
    }

    /// Law of the sorted cycle lengths.
    pub fn types(&self) -> BTreeMap<Vec<usize>, f64> {
        let mut m = BTreeMap::new();
        for (l, _, w) in &self.items {
            *m.entry(l.clone()).or_insert(0.0) += w;
        }
        m
    }

    pub fn count(&self) -> usize {
        self.items.len()
    }
}

pub fn count_of(lengths: &[usize], j: usize) -> usize {
    lengths.iter().filter(|&&a| a == j).count()
}

pub fn falling(x: usize, r: usize) -> f64 {
    (0..r)
        .map(|i| x as f64 - i as f64)
        .filter(|_| true)
        .product::<f64>()
        .max(0.0)
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + 1e-15
}

/// Partitions of `n` into parts ≥ 2, parts in non-increasing order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (2..=max.min(rest)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Cycle-type law from Cauchy's count: weight `∏ (θ/j)^{c_j} / c_j!`.
pub fn type_law(n: usize, theta: f64) -> BTreeMap<Vec<usize>, f64> {
    let raw: Vec<(Vec<usize>, f64)> = partitions(n)
        .into_iter()
        .map(|parts| {
            let mut w = 1.0;
            for j in 2..=n {
                let c = count_of(&parts, j);
                for k in 1..=c {
                    w *= theta / j as f64 / k as f64;
                }
            }
            let mut sorted = parts;
            sorted.sort_unstable();
            (sorted, w)
        })
        .collect();
    let total: f64 = raw.iter().map(|x| x.1).sum();
    raw.into_iter().map(|(k, w)| (k, w / total)).collect()
}

/// Law of the cycle lengths listed in size-biased order.
pub fn ordered_law(n: usize, theta: f64) -> BTreeMap<Vec<usize>, f64> {
    fn orders(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        let mut tried = Vec::new();
        for i in 0..rest.len() {
            if tried.contains(&rest[i]) {
                continue;
            }
            tried.push(rest[i]);
            let a = rest.remove(i);
            cur.push(a);
            orders(rest, cur, out);
            cur.pop();
            rest.insert(i, a);
        }
    }
    let mut law = BTreeMap::new();
    for (parts, p_type) in type_law(n, theta) {
        let mut seqs = Vec::new();
        orders(&mut parts.clone(), &mut Vec::new(), &mut seqs);
        let mult: f64 = (2..=n)
            .map(|j| (1..=count_of(&parts, j)).product::<usize>() as f64)
            .product();
        for seq in seqs {
            let mut remaining = n as f64;
            let mut p = mult;
            for &a in &seq {
                p *= a as f64 / remaining;
                remaining -= a as f64;
            }
            law.insert(seq, p_type * p);
        }
    }
    law
}
