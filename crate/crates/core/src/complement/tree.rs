//! Range-add / range-max tree over `[0, len)` with leftmost-argmax search.

const PAD: i64 = i64::MIN / 4;

/// Adds live on the node they were applied to and are never pushed down:
/// `max[v] = add[v] + max(max[2v], max[2v + 1])`.
pub(crate) struct MaxAddTree {
    size: usize,
    max: Vec<i64>,
    add: Vec<i64>,
}

impl MaxAddTree {
    pub fn from_fn(len: usize, value: impl Fn(usize) -> i64) -> Self {
        let size = len.max(1).next_power_of_two();
        let mut max = vec![PAD; 2 * size];
        for i in 0..len {
            max[size + i] = value(i);
        }
        for v in (1..size).rev() {
            max[v] = max[2 * v].max(max[2 * v + 1]);
        }
        MaxAddTree {
            size,
            max,
            add: vec![0; 2 * size],
        }
    }

    /// Adds `delta` to every position in `[l, r]`.
    pub fn add(&mut self, l: usize, r: usize, delta: i64) {
        self.add_rec(1, 0, self.size - 1, l, r, delta);
    }

    fn add_rec(&mut self, v: usize, lo: usize, hi: usize, l: usize, r: usize, delta: i64) {
        if r < lo || hi < l {
            return;
        }
        if l <= lo && hi <= r {
            self.max[v] += delta;
            self.add[v] += delta;
            return;
        }
        let mid = lo + (hi - lo) / 2;
        self.add_rec(2 * v, lo, mid, l, r, delta);
        self.add_rec(2 * v + 1, mid + 1, hi, l, r, delta);
        self.max[v] = self.add[v] + self.max[2 * v].max(self.max[2 * v + 1]);
    }

    /// Maximum over `[l, r]`.
    pub fn max(&self, l: usize, r: usize) -> i64 {
        self.max_rec(1, 0, self.size - 1, l, r)
    }

    fn max_rec(&self, v: usize, lo: usize, hi: usize, l: usize, r: usize) -> i64 {
        if r < lo || hi < l {
            return PAD;
        }
        if l <= lo && hi <= r {
            return self.max[v];
        }
        let mid = lo + (hi - lo) / 2;
        let best =
            self.max_rec(2 * v, lo, mid, l, r)
                .max(self.max_rec(2 * v + 1, mid + 1, hi, l, r));
        self.add[v] + best
    }

    /// Leftmost position in `[l, r]` whose value is at least `target`.
    pub fn first_at_least(&self, l: usize, r: usize, target: i64) -> Option<usize> {
        self.first_rec(1, 0, self.size - 1, l, r, target, 0)
    }

    #[allow(clippy::too_many_arguments)]
    fn first_rec(
        &self,
        v: usize,
        lo: usize,
        hi: usize,
        l: usize,
        r: usize,
        target: i64,
        above: i64,
    ) -> Option<usize> {
        if r < lo || hi < l || above + self.max[v] < target {
            return None;
        }
        if lo == hi {
            return Some(lo);
        }
        let mid = lo + (hi - lo) / 2;
        let above = above + self.add[v];
        self.first_rec(2 * v, lo, mid, l, r, target, above)
            .or_else(|| self.first_rec(2 * v + 1, mid + 1, hi, l, r, target, above))
    }

    #[cfg(test)]
    pub fn get(&self, i: usize) -> i64 {
        self.max(i, i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matches_naive(
            len in 1usize..70,
            ops in prop::collection::vec((0usize..70, 0usize..70, -50i64..50, any::<bool>()), 1..60),
        ) {
            let mut naive: Vec<i64> = (0..len).map(|i| 3 - (i as i64) * 2).collect();
            let mut tree = MaxAddTree::from_fn(len, |i| 3 - (i as i64) * 2);
            for (x, y, d, is_add) in ops {
                let (l, r) = (x.min(y) % len, x.max(y) % len);
                let (l, r) = (l.min(r), l.max(r));
                if is_add {
                    naive[l..=r].iter_mut().for_each(|v| *v += d);
                    tree.add(l, r, d);
                } else {
                    let m = *naive[l..=r].iter().max().unwrap();
                    prop_assert_eq!(tree.max(l, r), m);
                    let first = (l..=r).find(|&i| naive[i] >= m);
                    prop_assert_eq!(tree.first_at_least(l, r, m), first);
                    prop_assert_eq!(tree.first_at_least(l, r, m + 1), None);
                    prop_assert_eq!(tree.get(l), naive[l]);
                }
            }
        }
    }
}
