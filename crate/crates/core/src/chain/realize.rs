use super::eta::OrderedCycleLengths;
use super::rng::RngStream;

/// Builds a concrete permutation (one-line form, 1-based) with the given
/// ordered cycles. The first cycle starts at 1; each further element of a cycle
/// is a uniformly chosen unused integer, and each new cycle opens at the
/// smallest unused integer.
pub fn realize_permutation(lengths: &OrderedCycleLengths, rng: &mut RngStream) -> Vec<usize> {
    let n = lengths.total();
    let mut unused = Unused::new(n);
    let mut smallest = 1usize;
    let mut perm = vec![0usize; n];
    for &len in lengths.as_slice() {
        while unused.is_used(smallest) {
            smallest += 1;
        }
        let start = smallest;
        unused.take(start);
        let mut current = start;
        for _ in 1..len {
            let next = unused.pick(rng);
            perm[current - 1] = next;
            current = next;
        }
        perm[current - 1] = start;
    }
    perm
}

/// Unused integers `1..=n` with O(1) removal and uniform choice.
struct Unused {
    pool: Vec<usize>,
    // slot[v] = index of v in pool, usize::MAX once taken
    slot: Vec<usize>,
}

impl Unused {
    fn new(n: usize) -> Self {
        Unused {
            pool: (1..=n).collect(),
            slot: (0..=n).map(|v| v.wrapping_sub(1)).collect(),
        }
    }

    fn is_used(&self, v: usize) -> bool {
        self.slot[v] == usize::MAX
    }

    fn take(&mut self, v: usize) {
        let i = self.slot[v];
        self.pool.swap_remove(i);
        if let Some(&moved) = self.pool.get(i) {
            self.slot[moved] = i;
        }
        self.slot[v] = usize::MAX;
    }

    fn pick(&mut self, rng: &mut RngStream) -> usize {
        let v = self.pool[rng.below(self.pool.len())];
        self.take(v);
        v
    }
}
