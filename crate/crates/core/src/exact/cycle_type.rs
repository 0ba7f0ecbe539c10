use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::{Error, Result};

/// Unordered cycle structure of a derangement: `c_j` cycles of length `j` for
/// `j ≥ 2`, with `Σ j·c_j = n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CycleType {
    n: usize,
    counts: BTreeMap<usize, usize>,
}

impl CycleType {
    pub fn new(n: usize, counts: BTreeMap<usize, usize>) -> Result<Self> {
        let mut clean = BTreeMap::new();
        let mut total = 0usize;
        for (j, c) in counts {
            if c == 0 {
                continue;
            }
            if j < 2 {
                return Err(Error::InvalidParams(format!(
                    "cycle length {j} is not allowed in a derangement"
                )));
            }
            total += j * c;
            clean.insert(j, c);
        }
        if total != n {
            return Err(Error::InvalidParams(format!(
                "cycle lengths sum to {total}, expected {n}"
            )));
        }
        Ok(CycleType { n, counts: clean })
    }

    /// Tallies a list of cycle lengths.
    pub fn from_lengths(lengths: &[usize]) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for &a in lengths {
            *counts.entry(a).or_insert(0) += 1;
        }
        CycleType::new(lengths.iter().sum(), counts)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self, j: usize) -> usize {
        self.counts.get(&j).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn num_cycles(&self) -> usize {
        self.counts.values().sum()
    }

    /// Cycle lengths in descending order.
    pub fn parts(&self) -> Vec<usize> {
        self.counts
            .iter()
            .rev()
            .flat_map(|(&j, &c)| std::iter::repeat_n(j, c))
            .collect()
    }

    pub fn has_distinct_lengths(&self) -> bool {
        self.counts.values().all(|&c| c <= 1)
    }

    pub fn all_odd(&self) -> bool {
        self.counts.keys().all(|j| j % 2 == 1)
    }

    pub fn all_even(&self) -> bool {
        self.counts.keys().all(|j| j % 2 == 0)
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.parts();
        write!(f, "(")?;
        for (i, p) in parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}
