//! Order-statistic set over `0..n` backed by a Fenwick tree.

/// Subset of `0..n` supporting k-th smallest and rank queries in `O(log n)`.
#[derive(Debug, Clone)]
pub struct OrderStatSet {
    tree: Vec<u32>,
    present: Vec<bool>,
    len: usize,
    // Highest power of two <= n, for the binary-lifting descent.
    top: usize,
}

impl OrderStatSet {
    /// The set `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut tree = vec![0u32; n + 1];
        for i in 1..=n {
            tree[i] += 1;
            let parent = i + (i & i.wrapping_neg());
            if parent <= n {
                tree[parent] += tree[i];
            }
        }
        let top = if n == 0 { 0 } else { 1 << (usize::BITS - 1 - n.leading_zeros()) };
        Self { tree, present: vec![true; n], len: n, top }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.present.get(v).copied().unwrap_or(false)
    }

    /// Removes `v`; returns whether it was present.
    pub fn remove(&mut self, v: usize) -> bool {
        if !self.contains(v) {
            return false;
        }
        self.present[v] = false;
        self.len -= 1;
        let mut i = v + 1;
        while i < self.tree.len() {
            self.tree[i] -= 1;
            i += i & i.wrapping_neg();
        }
        true
    }

    /// Number of members strictly less than `v`.
    pub fn rank(&self, v: usize) -> usize {
        let mut i = v.min(self.present.len());
        let mut acc = 0usize;
        while i > 0 {
            acc += self.tree[i] as usize;
            i &= i - 1;
        }
        acc
    }

    /// The member with exactly `r` smaller members (0-based), if any.
    pub fn select(&self, r: usize) -> Option<usize> {
        if r >= self.len {
            return None;
        }
        let mut pos = 0usize;
        let mut remaining = r;
        let mut step = self.top;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && (self.tree[next] as usize) <= remaining {
                pos = next;
                remaining -= self.tree[next] as usize;
            }
            step >>= 1;
        }
        // pos is the count of slots skipped; the answer is slot pos (0-based).
        Some(pos)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn select_and_rank_on_full_set() {
        let s = OrderStatSet::full(10);
        assert_eq!(s.len(), 10);
        for i in 0..10 {
            assert_eq!(s.select(i), Some(i));
            assert_eq!(s.rank(i), i);
        }
        assert_eq!(s.select(10), None);
        assert_eq!(s.rank(100), 10);
    }

    #[test]
    fn empty_set() {
        let mut s = OrderStatSet::full(0);
        assert!(s.is_empty());
        assert_eq!(s.select(0), None);
        assert!(!s.remove(0));
    }

    #[test]
    fn removal_updates_order() {
        let mut s = OrderStatSet::full(6);
        assert!(s.remove(2));
        assert!(!s.remove(2));
        assert!(s.remove(0));
        assert_eq!(s.len(), 4);
        assert_eq!((0..4).map(|r| s.select(r).unwrap()).collect::<Vec<_>>(), vec![1, 3, 4, 5]);
        assert_eq!(s.rank(4), 2);
    }

    proptest! {
        #[test]
        fn matches_sorted_vec(n in 1usize..200, removals in proptest::collection::vec(0usize..200, 0..150)) {
            let mut set = OrderStatSet::full(n);
            let mut reference: Vec<usize> = (0..n).collect();
            for r in removals {
                let v = r % n;
                let expected = reference.binary_search(&v).map(|i| { reference.remove(i); }).is_ok();
                prop_assert_eq!(set.remove(v), expected);
            }
            prop_assert_eq!(set.len(), reference.len());
            for (i, &v) in reference.iter().enumerate() {
                prop_assert_eq!(set.select(i), Some(v));
                prop_assert_eq!(set.rank(v), i);
            }
        }
    }
}
