use serde::{Deserialize, Serialize};
use std::fmt;

use crate::exact::CycleType;
use crate::{Error, Result};

/// A member of `Δ_n`: bits `(η_n, …, η_1)` with implicit boundary `η_{n+1} = 1`.
///
/// Reading `1 η_n ⋯ η_1`, the gaps between consecutive 1s are the ordered cycle
/// lengths, so a valid sequence has `η_n = 0`, `η_1 = 1` and no two adjacent 1s.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EtaSequence {
    bits: Vec<u8>,
}

impl EtaSequence {
    /// `bits[0]` is `η_n`, the last entry is `η_1`.
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        let n = bits.len();
        if n < 2 {
            return Err(Error::InvalidEta(format!("length {n} < 2")));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidEta(format!("bit value {b}")));
        }
        if bits[n - 1] != 1 {
            return Err(Error::InvalidEta("η_1 must be 1".into()));
        }
        if bits[0] != 0 {
            return Err(Error::InvalidEta("η_n must be 0".into()));
        }
        if bits.windows(2).any(|w| w == [1, 1]) {
            return Err(Error::InvalidEta("adjacent 1s (a fixed point)".into()));
        }
        Ok(EtaSequence { bits })
    }

    /// Encodes ordered cycle lengths, first cycle adjacent to the top boundary.
    pub fn from_lengths(lengths: &OrderedCycleLengths) -> Self {
        let mut bits = Vec::with_capacity(lengths.total());
        for &a in lengths.as_slice() {
            bits.extend(std::iter::repeat_n(0, a - 1));
            bits.push(1);
        }
        EtaSequence { bits }
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }

    /// Bits in generation order `(η_n, …, η_1)`.
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// `η_i` for `1 ≤ i ≤ n + 1`.
    pub fn at(&self, i: usize) -> u8 {
        let n = self.n();
        assert!(
            (1..=n + 1).contains(&i),
            "position {i} outside 1..={}",
            n + 1
        );
        if i == n + 1 {
            1
        } else {
            self.bits[n - i]
        }
    }

    /// Number of 1s among `η_n, …, η_1`, i.e. the number of cycles.
    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// Positions `σ_0 = n+1 > σ_1 > ⋯ > σ_K = 1` of the 1s.
    pub fn sigma(&self) -> Vec<usize> {
        let n = self.n();
        std::iter::once(n + 1)
            .chain(
                self.bits
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b == 1)
                    .map(|(k, _)| n - k),
            )
            .collect()
    }

    pub fn lengths(&self) -> OrderedCycleLengths {
        eta_to_lengths(self)
    }

    /// Reverses `1 η_n ⋯ η_1`, which reverses the order of the cycles.
    pub fn reversed(&self) -> EtaSequence {
        let mut lengths = self.lengths().into_vec();
        lengths.reverse();
        EtaSequence::from_lengths(&OrderedCycleLengths(lengths))
    }

    /// Moves the 1 at position `i` down to `i − 1`, for `4 ≤ i ≤ n − 1`,
    /// provided `η_i = 1` and `η_{i−2} = 0`; otherwise returns the input.
    pub(crate) fn shifted(&self, i: usize) -> EtaSequence {
        let n = self.n();
        if self.at(i) == 1 && self.at(i - 2) == 0 {
            let mut bits = self.bits.clone();
            bits[n - i] = 0;
            bits[n - i + 1] = 1;
            EtaSequence { bits }
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for EtaSequence {
    /// Renders `1 η_n ⋯ η_1` as a bit string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1")?;
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Cycle lengths `(A_1, …, A_K)` in the order a sampler produced them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderedCycleLengths(Vec<usize>);

impl OrderedCycleLengths {
    pub fn new(lengths: Vec<usize>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::InvalidParams("no cycles".into()));
        }
        if let Some(a) = lengths.iter().find(|&&a| a < 2) {
            return Err(Error::InvalidParams(format!("cycle of length {a}")));
        }
        Ok(OrderedCycleLengths(lengths))
    }

    pub(crate) fn from_vec_unchecked(lengths: Vec<usize>) -> Self {
        debug_assert!(!lengths.is_empty() && lengths.iter().all(|&a| a >= 2));
        OrderedCycleLengths(lengths)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn num_cycles(&self) -> usize {
        self.0.len()
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn longest(&self) -> usize {
        *self.0.iter().max().expect("non-empty")
    }

    pub fn cycle_type(&self) -> CycleType {
        CycleType::from_lengths(&self.0).expect("lengths are all >= 2")
    }

    pub fn is_weakly_decreasing(&self) -> bool {
        is_weakly_decreasing(&self.0)
    }

    pub fn is_weakly_increasing(&self) -> bool {
        is_weakly_increasing(&self.0)
    }
}

fn is_weakly_decreasing(a: &[usize]) -> bool {
    a.windows(2).all(|w| w[0] >= w[1])
}

fn is_weakly_increasing(a: &[usize]) -> bool {
    a.windows(2).all(|w| w[0] <= w[1])
}

/// Gaps between consecutive 1s of `1 η_n ⋯ η_1`, first cycle first.
pub fn eta_to_lengths(eta: &EtaSequence) -> OrderedCycleLengths {
    let mut lengths = Vec::new();
    let mut run = 0usize;
    for &b in eta.bits() {
        run += 1;
        if b == 1 {
            lengths.push(run);
            run = 0;
        }
    }
    OrderedCycleLengths::from_vec_unchecked(lengths)
}

/// A sampled derangement: its cycle type, the ordered cycle lengths, and
/// optionally a concrete permutation in one-line form (1-based).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerangementSample {
    pub cycle_type: CycleType,
    pub ordered_lengths: OrderedCycleLengths,
    pub permutation: Option<Vec<usize>>,
}

impl DerangementSample {
    pub fn from_lengths(lengths: OrderedCycleLengths) -> Self {
        DerangementSample {
            cycle_type: lengths.cycle_type(),
            ordered_lengths: lengths,
            permutation: None,
        }
    }
}
