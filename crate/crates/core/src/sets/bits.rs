//! Fixed-length bit vector over `[0, len)` with word-level shift-or.

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn new(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_positions(len: usize, positions: impl IntoIterator<Item = u64>) -> Self {
        let mut bits = Bits::new(len);
        for p in positions {
            if (p as usize) < len {
                bits.set(p as usize);
            }
        }
        bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    /// Clears every bit in `[lo, hi]` (clamped to the vector).
    pub fn clear_range(&mut self, lo: usize, hi: usize) {
        let hi = hi.min(self.len.saturating_sub(1));
        if lo > hi || lo >= self.len {
            return;
        }
        let (lw, hw) = (lo / 64, hi / 64);
        let low_mask = !0u64 << (lo % 64);
        let high_mask = !0u64 >> (63 - hi % 64);
        if lw == hw {
            self.words[lw] &= !(low_mask & high_mask);
            return;
        }
        self.words[lw] &= !low_mask;
        for w in &mut self.words[lw + 1..hw] {
            *w = 0;
        }
        self.words[hw] &= !high_mask;
    }

    /// `self |= src << shift`, discarding bits that land at or past `len`.
    pub fn or_shifted(&mut self, src: &Bits, shift: usize) {
        if shift >= self.len {
            return;
        }
        let word_shift = shift / 64;
        let bit_shift = shift % 64;
        let end = self.words.len().min(word_shift + src.words.len() + 1);
        for w in word_shift..end {
            let i = w - word_shift;
            let lo = src.words.get(i).copied().unwrap_or(0);
            let mut v = lo << bit_shift;
            if bit_shift != 0 && i > 0 {
                v |= src.words.get(i - 1).copied().unwrap_or(0) >> (64 - bit_shift);
            }
            self.words[w] |= v;
        }
        self.trim();
    }

    fn trim(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Number of ones in `[lo, hi]` (clamped to the vector).
    pub fn count_range(&self, lo: usize, hi: usize) -> u64 {
        let hi = hi.min(self.len.saturating_sub(1));
        if lo > hi || lo >= self.len {
            return 0;
        }
        let (lw, hw) = (lo / 64, hi / 64);
        let low_mask = !0u64 << (lo % 64);
        let high_mask = !0u64 >> (63 - hi % 64);
        if lw == hw {
            return (self.words[lw] & low_mask & high_mask).count_ones() as u64;
        }
        let middle: u64 = self.words[lw + 1..hw]
            .iter()
            .map(|w| w.count_ones() as u64)
            .sum();
        (self.words[lw] & low_mask).count_ones() as u64
            + middle
            + (self.words[hw] & high_mask).count_ones() as u64
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as u64;
                w &= w - 1;
                Some(wi as u64 * 64 + tz)
            })
        })
    }

    /// Running popcount before each word: `prefix[w] = ones in words[..w]`.
    pub fn word_prefix(&self) -> Vec<u64> {
        let mut acc = 0;
        let mut prefix = Vec::with_capacity(self.words.len() + 1);
        for w in &self.words {
            prefix.push(acc);
            acc += w.count_ones() as u64;
        }
        prefix.push(acc);
        prefix
    }

    /// Number of ones in `[0, i]` given the table from [`Bits::word_prefix`].
    #[inline]
    pub fn rank_inclusive(&self, prefix: &[u64], i: usize) -> u64 {
        let w = i / 64;
        let mask = if i % 64 == 63 {
            !0
        } else {
            (1u64 << (i % 64 + 1)) - 1
        };
        prefix[w] + (self.words[w] & mask).count_ones() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn clear_range_across_words() {
        let mut b = Bits::from_positions(200, 0..200);
        b.clear_range(10, 130);
        assert_eq!(b.count_range(0, 199), 200 - 121);
        assert_eq!(b.count_range(5, 140), 5 + 10);
        assert_eq!(b.count_range(131, 131), 1);
        assert!(b.get(9) && !b.get(10) && !b.get(130) && b.get(131));
    }

    proptest! {
        #[test]
        fn shift_or_matches_naive(
            xs in proptest::collection::btree_set(0u64..300, 0..40),
            shift in 0usize..400,
            len in 1usize..350,
        ) {
            let src = Bits::from_positions(len, xs.iter().copied());
            let mut dst = Bits::new(len);
            dst.or_shifted(&src, shift);
            let expect: Vec<u64> = xs
                .iter()
                .filter(|&&x| (x as usize) < len)
                .map(|&x| x + shift as u64)
                .filter(|&y| (y as usize) < len)
                .collect();
            prop_assert_eq!(dst.iter_ones().collect::<Vec<_>>(), expect);
        }

        #[test]
        fn rank_matches_scan(xs in proptest::collection::btree_set(0u64..500, 0..80), i in 0usize..500) {
            let b = Bits::from_positions(500, xs.iter().copied());
            let prefix = b.word_prefix();
            let expect = xs.iter().filter(|&&x| x as usize <= i).count() as u64;
            prop_assert_eq!(b.rank_inclusive(&prefix, i), expect);
            let lo = i / 3;
            let between = xs.iter().filter(|&&x| (lo..=i).contains(&(x as usize))).count() as u64;
            prop_assert_eq!(b.count_range(lo, i), between);
        }
    }
}
