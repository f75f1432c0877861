use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::tree::MaxAddTree;
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::sets::Bits;
use crate::sets::IntegerSet;
use crate::sparseness::SparsenessRates;

/// Inputs of one greedy run. `horizon` is the largest integer the sumset is
/// tracked to; candidates `a` are scanned while `a + f(a) <= horizon`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyParams {
    pub alpha: Rational,
    pub rates: SparsenessRates,
    pub threshold: u64,
    pub horizon: u64,
}

impl Serialize for GreedyParams {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GreedyParams", 6)?;
        st.serialize_field("alpha", &format_rational(&self.alpha))?;
        st.serialize_field("threshold", &self.threshold)?;
        st.serialize_field("horizon", &self.horizon)?;
        st.serialize_field("f", &self.rates.f.to_string())?;
        st.serialize_field("g", &self.rates.g.to_string())?;
        st.serialize_field("certified_from", &self.rates.certified_from)?;
        st.end()
    }
}

/// Why `a` was admitted: the first `n` in `[a, window_end]` where the slack
/// `alpha·n - (A_k + B0)(n)` is smallest, with the count there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Audit {
    pub a: u64,
    pub window_end: u64,
    pub peak_n: u64,
    pub peak_count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyTrace {
    /// `None` when the run short-circuited (`alpha` is 0 or 1).
    pub params: Option<GreedyParams>,
    /// `min B`, subtracted from the chosen elements to get the final set.
    pub shift: u64,
    pub chosen: Vec<u64>,
    pub audits: Vec<Audit>,
    /// Largest candidate whose window fits the tracked range.
    pub last_candidate: u64,
    /// Every candidate `a <= scanned_to` has been decided.
    pub scanned_to: u64,
    pub exhausted: bool,
}

impl GreedyTrace {
    pub(crate) fn short_circuit(scanned_to: u64) -> Self {
        GreedyTrace {
            params: None,
            shift: 0,
            chosen: Vec::new(),
            audits: Vec::new(),
            last_candidate: scanned_to,
            scanned_to,
            exhausted: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Chosen(u64),
    Exhausted,
}

/// The greedy with its running sumset `S = A_k + B0`.
///
/// `P(n) = q·S(n) - p·n` for `alpha = p/q` lives in a range-add/range-max
/// tree; admitting `a` adds `q` on `[x, H]` for each new sum `x`, and a
/// candidate window is checked piecewise between its new sums.
pub struct Greedy<'b> {
    params: GreedyParams,
    b0: &'b [u64],
    p: i64,
    q: i64,
    tree: MaxAddTree,
    in_sum: Bits,
    next: u64,
    trace: GreedyTrace,
}

impl<'b> Greedy<'b> {
    pub fn new(params: GreedyParams, b0: &'b IntegerSet) -> Result<Self> {
        let w = params.horizon;
        if b0.min() != Some(0) {
            return Err(Error::Precondition("B0 must contain 0".into()));
        }
        if b0.horizon() < w {
            return Err(Error::Precondition(format!(
                "B0 known only up to {}, greedy tracks sums up to {w}",
                b0.horizon()
            )));
        }
        let (p, q) = (*params.alpha.numer(), *params.alpha.denom());
        if p == 0 || p >= q {
            return Err(Error::Precondition("greedy needs 0 < alpha < 1".into()));
        }
        if params.threshold == 0 {
            return Err(Error::Precondition("threshold must be at least 1".into()));
        }
        let fits = (q as u128) * (w as u128 + 1) < (1u128 << 61);
        if !fits || w >= usize::MAX as u64 {
            return Err(Error::Overflow(format!(
                "alpha denominator {q} times horizon {w} is too large"
            )));
        }
        let (p, q) = (p as i64, q as i64);
        let last_candidate = last_fitting(&params.rates, params.threshold, w);
        let tree = MaxAddTree::from_fn(w as usize + 1, |n| -p * n as i64);
        let trace = GreedyTrace {
            params: Some(params.clone()),
            shift: 0,
            chosen: Vec::new(),
            audits: Vec::new(),
            last_candidate,
            scanned_to: params.threshold - 1,
            exhausted: false,
        };
        Ok(Greedy {
            next: params.threshold,
            in_sum: Bits::new(w as usize + 1),
            params,
            b0: b0.elements(),
            p,
            q,
            tree,
            trace,
        })
    }

    pub fn trace(&self) -> &GreedyTrace {
        &self.trace
    }

    /// Admits the next element, or reports that no candidate with a complete
    /// window is left.
    pub fn step(&mut self) -> Result<Step> {
        while self.next <= self.trace.last_candidate {
            let a = self.next;
            self.next += 1;
            self.trace.scanned_to = a;
            let end = a + self.params.rates.f_at(a)?;
            if let Some(audit) = self.admissible(a, end) {
                self.admit(a);
                self.trace.chosen.push(a);
                self.trace.audits.push(audit);
                return Ok(Step::Chosen(a));
            }
        }
        self.trace.exhausted = true;
        Ok(Step::Exhausted)
    }

    pub fn run(mut self) -> Result<(GreedyTrace, IntegerSet)> {
        while self.step()? != Step::Exhausted {}
        let sums = IntegerSet::from_bits(&self.in_sum, self.params.horizon);
        Ok((self.trace, sums))
    }

    /// `Some(audit)` if `count((A_k ∪ {a}) + B0, n) <= alpha·n` on `[a, end]`.
    fn admissible(&self, a: u64, end: u64) -> Option<Audit> {
        let mut best: Option<(i64, usize, usize, i64)> = None;
        let mut check = |lo: u64, hi: u64, delta: i64| -> bool {
            let bump = self.q * delta;
            let v = self.tree.max(lo as usize, hi as usize) + bump;
            if v > 0 {
                return false;
            }
            if best.is_none_or(|(bv, ..)| v > bv) {
                best = Some((v, lo as usize, hi as usize, bump));
            }
            true
        };
        let mut delta = 0i64;
        let mut start = a;
        for &b in self.b0 {
            let x = a + b;
            if x > end {
                break;
            }
            if self.in_sum.get(x as usize) {
                continue;
            }
            if x > start && !check(start, x - 1, delta) {
                return None;
            }
            delta += 1;
            start = x;
        }
        if !check(start, end, delta) {
            return None;
        }
        let (v, lo, hi, bump) = best.expect("window is non-empty");
        let n = self
            .tree
            .first_at_least(lo, hi, v - bump)
            .expect("maximum is attained");
        let count = (v + self.p * n as i64) / self.q;
        Some(Audit {
            a,
            window_end: end,
            peak_n: n as u64,
            peak_count: count as u64,
        })
    }

    fn admit(&mut self, a: u64) {
        let w = self.params.horizon;
        for &b in self.b0 {
            let x = a + b;
            if x > w {
                break;
            }
            if !self.in_sum.get(x as usize) {
                self.in_sum.set(x as usize);
                self.tree.add(x as usize, w as usize, self.q);
            }
        }
    }
}

/// Largest `a` in `[from, w]` with `a + f(a) <= w`, or `from - 1` if none.
fn last_fitting(rates: &SparsenessRates, from: u64, w: u64) -> u64 {
    let fits = |a: u64| matches!(rates.f_at(a), Ok(f) if a.checked_add(f).is_some_and(|e| e <= w));
    if from > w || !fits(from) {
        return from - 1;
    }
    let (mut lo, mut hi) = (from, w);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}
