//! Finite-horizon integer sets: representation, counting function, sumsets.
//!
//! A set `S` lives on a horizon `H`: every element is in `[0, H]`. The
//! counting function `S(n)` counts elements in `[1, n]`, so `0` can be a
//! member (and takes part in sums) without ever being counted.

mod bits;
mod generator;
mod io;
mod profile;

pub(crate) use bits::Bits;
pub use generator::SetGenerator;
pub use io::{read_set, read_set_str, write_set, write_set_string};
pub use profile::{DensityProfile, Sample};

use crate::error::{Error, Result};

/// Horizons up to this size get a dense bit index with O(1) counting.
/// Larger horizons fall back to binary search on the sorted elements.
pub const DENSE_LIMIT: u64 = 1 << 27;

#[derive(Clone, Debug)]
struct DenseIndex {
    bits: Bits,
    prefix: Vec<u64>,
}

impl DenseIndex {
    fn new(bits: Bits) -> Self {
        let prefix = bits.word_prefix();
        DenseIndex { bits, prefix }
    }
}

/// A finite subset of `[0, H]`.
#[derive(Clone, Debug)]
pub struct IntegerSet {
    elements: Vec<u64>,
    horizon: u64,
    index: Option<DenseIndex>,
}

impl PartialEq for IntegerSet {
    fn eq(&self, other: &Self) -> bool {
        self.horizon == other.horizon && self.elements == other.elements
    }
}

impl Eq for IntegerSet {}

impl IntegerSet {
    /// Builds a set from arbitrary elements; sorts and deduplicates.
    pub fn new(mut elements: Vec<u64>, horizon: u64) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        Self::from_sorted(elements, horizon)
    }

    /// Builds a set from a strictly increasing sequence.
    pub fn from_sorted(elements: Vec<u64>, horizon: u64) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::Precondition("horizon must be at least 1".into()));
        }
        if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Input(format!(
                "elements not strictly increasing: {} then {}",
                w[0], w[1]
            )));
        }
        if let Some(&last) = elements.last() {
            if last > horizon {
                return Err(Error::Input(format!(
                    "element {last} exceeds horizon {horizon}"
                )));
            }
        }
        let index = (horizon <= DENSE_LIMIT).then(|| {
            DenseIndex::new(Bits::from_positions(
                horizon as usize + 1,
                elements.iter().copied(),
            ))
        });
        Ok(IntegerSet {
            elements,
            horizon,
            index,
        })
    }

    /// Keeps the elements `<= horizon` of an arbitrary collection.
    pub fn clamped(elements: Vec<u64>, horizon: u64) -> Result<Self> {
        let kept = elements.into_iter().filter(|&x| x <= horizon).collect();
        Self::new(kept, horizon)
    }

    pub(crate) fn from_bits(bits: &Bits, horizon: u64) -> Self {
        debug_assert_eq!(bits.len() as u64, horizon + 1);
        let elements: Vec<u64> = bits.iter_ones().collect();
        IntegerSet {
            elements,
            horizon,
            index: Some(DenseIndex::new(bits.clone())),
        }
    }

    pub fn empty(horizon: u64) -> Result<Self> {
        Self::from_sorted(Vec::new(), horizon)
    }

    /// `[lo, hi] ∩ [0, horizon]`.
    pub fn interval(lo: u64, hi: u64, horizon: u64) -> Result<Self> {
        let hi = hi.min(horizon);
        Self::from_sorted((lo..=hi).collect(), horizon)
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<u64> {
        self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.elements.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.elements.last().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.elements.iter().copied()
    }

    pub fn contains(&self, x: u64) -> bool {
        match &self.index {
            Some(ix) => x <= self.horizon && ix.bits.get(x as usize),
            None => self.elements.binary_search(&x).is_ok(),
        }
    }

    /// Number of elements in `[0, n]`, `n <= horizon`.
    fn rank(&self, n: u64) -> u64 {
        match &self.index {
            Some(ix) => ix.bits.rank_inclusive(&ix.prefix, n as usize),
            None => self.elements.partition_point(|&x| x <= n) as u64,
        }
    }

    /// The counting function: `#(S ∩ [1, n])`.
    pub fn count(&self, n: u64) -> Result<u64> {
        if n > self.horizon {
            return Err(Error::OutOfRange {
                n,
                horizon: self.horizon,
            });
        }
        Ok(self.count_unchecked(n))
    }

    pub(crate) fn count_unchecked(&self, n: u64) -> u64 {
        if n == 0 {
            return 0;
        }
        self.rank(n) - u64::from(self.elements.first() == Some(&0))
    }

    /// Same set viewed on a smaller horizon.
    pub fn truncate(&self, horizon: u64) -> Result<Self> {
        if horizon >= self.horizon {
            return Ok(self.clone());
        }
        let cut = self.elements.partition_point(|&x| x <= horizon);
        Self::from_sorted(self.elements[..cut].to_vec(), horizon)
    }

    /// Same elements, larger horizon. The caller vouches that no element in
    /// `(old horizon, horizon]` is missing.
    pub fn with_horizon(&self, horizon: u64) -> Result<Self> {
        if horizon <= self.horizon {
            return self.truncate(horizon);
        }
        Self::from_sorted(self.elements.clone(), horizon)
    }

    /// Returns the set as a bit vector over `[0, len)`; elements past `len`
    /// are dropped.
    pub(crate) fn to_bits(&self, len: usize) -> Bits {
        match &self.index {
            Some(ix) if ix.bits.len() == len => ix.bits.clone(),
            _ => Bits::from_positions(len, self.elements.iter().copied()),
        }
    }

    /// `B + k`, horizon raised by `k`.
    pub fn translate_up(&self, k: u64) -> Result<Self> {
        let overflow = || Error::Overflow(format!("shifting set up by {k}"));
        let horizon = self.horizon.checked_add(k).ok_or_else(overflow)?;
        let elements = self
            .elements
            .iter()
            .map(|&x| x.checked_add(k).ok_or_else(overflow))
            .collect::<Result<Vec<_>>>()?;
        Self::from_sorted(elements, horizon)
    }

    /// `(B - k) ∩ [lowest, ∞)` with `lowest` either 0 or 1; horizon lowered by `k`.
    pub fn translate_down(&self, k: u64, keep_zero: bool) -> Result<Self> {
        let lowest = if keep_zero { k } else { k + 1 };
        let elements = self
            .elements
            .iter()
            .filter(|&&x| x >= lowest)
            .map(|&x| x - k)
            .collect();
        Self::from_sorted(elements, self.horizon.saturating_sub(k).max(1))
    }

    /// `self ∪ other` on the larger of the two horizons.
    pub fn union(&self, other: &IntegerSet) -> Result<Self> {
        let mut all = self.elements.clone();
        all.extend_from_slice(&other.elements);
        Self::new(all, self.horizon.max(other.horizon))
    }

    pub fn is_subset(&self, other: &IntegerSet) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }
}

/// `{a + b <= horizon : a ∈ A, b ∈ B}`.
///
/// Both summands must be known up to `horizon`; otherwise pairs near the
/// boundary could be missing and the result would be silently incomplete.
pub fn sumset(a: &IntegerSet, b: &IntegerSet, horizon: u64) -> Result<IntegerSet> {
    if horizon == 0 {
        return Err(Error::Precondition("horizon must be at least 1".into()));
    }
    if a.horizon < horizon || b.horizon < horizon {
        return Err(Error::Precondition(format!(
            "sumset to horizon {horizon} needs both summands materialized that far \
             (got {} and {})",
            a.horizon, b.horizon
        )));
    }
    if a.is_empty() || b.is_empty() {
        return IntegerSet::empty(horizon);
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if horizon > DENSE_LIMIT {
        let mut out = Vec::new();
        for &x in small.elements() {
            for &y in large.elements() {
                match x.checked_add(y) {
                    Some(s) if s <= horizon => out.push(s),
                    _ => break,
                }
            }
        }
        return IntegerSet::new(out, horizon);
    }
    let len = horizon as usize + 1;
    let mut acc = Bits::new(len);
    let pair_cost = small.len() as u64 * large.len() as u64;
    let shift_cost = small.len() as u64 * (len as u64 / 64 + 1);
    if pair_cost <= shift_cost {
        for &x in small.elements() {
            for &y in large.elements() {
                let s = x + y;
                if s > horizon {
                    break;
                }
                acc.set(s as usize);
            }
        }
    } else {
        let src = large.to_bits(len);
        for &x in small.elements() {
            if x > horizon {
                break;
            }
            acc.or_shifted(&src, x as usize);
        }
    }
    Ok(IntegerSet::from_bits(&acc, horizon))
}

/// Density profile with the tail window `[⌈H/2⌉, H]`.
pub fn density_profile(s: &IntegerSet, stride: u64) -> Result<DensityProfile> {
    DensityProfile::new(s, stride, s.horizon().div_ceil(2).max(1))
}
