//! Proportional sampling over integer weights backed by a Fenwick tree,
//! so both a single draw and a weight update cost O(log n).

use rand::Rng;

/// Indexed cumulative-weight structure for degree-proportional draws.
///
/// Weights are unsigned integers; an element with weight 0 is never drawn.
#[derive(Debug, Clone, Default)]
pub struct WeightedIndex {
    // Fenwick tree, 1-based: tree[i] covers weights[(i - lowbit(i))..i].
    tree: Vec<u64>,
    weights: Vec<u64>,
}

impl WeightedIndex {
    pub fn new() -> Self {
        WeightedIndex {
            tree: vec![0],
            weights: Vec::new(),
        }
    }

    pub fn with_weights(weights: impl IntoIterator<Item = u64>) -> Self {
        let mut idx = Self::new();
        for w in weights {
            idx.push(w);
        }
        idx
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, i: usize) -> u64 {
        self.weights[i]
    }

    /// Sum of weights over `0..i` (exclusive upper bound).
    fn prefix(&self, mut i: usize) -> u64 {
        let mut sum = 0;
        while i > 0 {
            sum += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        sum
    }

    pub fn total_weight(&self) -> u64 {
        self.prefix(self.len())
    }

    /// Append an element with weight `w`.
    pub fn push(&mut self, w: u64) {
        self.weights.push(w);
        let i = self.weights.len(); // 1-based position of the new element
        let lowbit = i & i.wrapping_neg();
        // sum over the block (i - lowbit, i] from already-known prefixes
        let block = self.prefix(i - 1) - self.prefix(i - lowbit) + w;
        self.tree.push(block);
    }

    pub fn set_weight(&mut self, i: usize, w: u64) {
        let old = self.weights[i];
        if old == w {
            return;
        }
        self.weights[i] = w;
        let mut pos = i + 1;
        while pos <= self.weights.len() {
            if w >= old {
                self.tree[pos] += w - old;
            } else {
                self.tree[pos] -= old - w;
            }
            pos += pos & pos.wrapping_neg();
        }
    }

    /// Draw one index with probability proportional to its weight.
    /// Returns `None` when all weights are zero.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        let total = self.total_weight();
        if total == 0 {
            return None;
        }
        let target = rng.gen_range(0..total);
        // descend: find the first index whose cumulative weight exceeds target
        let mut idx = 0usize;
        let mut rem = target;
        let mut bit = self.weights.len().next_power_of_two();
        while bit > 0 {
            let next = idx + bit;
            if next <= self.weights.len() && self.tree[next] <= rem {
                rem -= self.tree[next];
                idx = next;
            }
            bit >>= 1;
        }
        debug_assert!(self.weights[idx] > 0);
        Some(idx)
    }

    /// Draw up to `k` distinct indices without replacement, each sequential
    /// draw proportional to the remaining weights. A drawn index has its
    /// weight zeroed for the rest of the batch and restored afterwards.
    /// Returns fewer than `k` indices (possibly none) when the positive
    /// weights run out.
    pub fn sample_distinct<R: Rng + ?Sized>(&mut self, k: usize, rng: &mut R) -> Vec<usize> {
        let mut picks = Vec::with_capacity(k);
        let mut saved = Vec::with_capacity(k);
        for _ in 0..k {
            match self.sample(rng) {
                Some(i) => {
                    saved.push((i, self.weights[i]));
                    self.set_weight(i, 0);
                    picks.push(i);
                }
                None => break,
            }
        }
        for (i, w) in saved {
            self.set_weight(i, w);
        }
        picks
    }
}
