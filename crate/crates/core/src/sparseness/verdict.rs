use std::cmp::Ordering;

use serde::Serialize;

use super::rates::{Expr, SparsenessRates, Table};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::sets::IntegerSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    SparseConsistent,
    NotSparse,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// `b_t < b_s` both above `f(a)` with `b_s - b_t < a + g(a)`.
    PsrViolation { a: u64, b_t: u64, b_s: u64 },
    /// A tail ratio `b_{j+1}/b_j` (1-based `j`) that stays below `bound`.
    RatioTail {
        index: usize,
        b_j: u64,
        b_next: u64,
        #[serde(serialize_with = "ser_rational")]
        bound: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScannedRange {
    /// Ratio indices `j` examined (1-based, inclusive).
    Indices { first: usize, last: usize },
    /// Values of `a` examined (inclusive).
    A { lo: u64, hi: u64 },
}

/// For one ratio target `M`: the least `j` with `b_{i+1}/b_i > M` for all
/// scanned `i >= j`, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TargetOutcome {
    #[serde(serialize_with = "ser_rational")]
    pub target: Rational,
    pub exceeded_from: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparsenessVerdict {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub scanned: ScannedRange,
    pub targets: Vec<TargetOutcome>,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format_rational(r))
}

/// `(b_j, b_{j+1})` for consecutive elements.
pub fn consecutive_ratios(b: &IntegerSet) -> Vec<(u64, u64)> {
    b.elements().windows(2).map(|w| (w[0], w[1])).collect()
}

fn ratio_cmp(&(lo, hi): &(u64, u64), m: &Rational) -> Ordering {
    // hi / lo vs m
    (hi as u128 * *m.denom() as u128).cmp(&(*m.numer() as u128 * lo as u128))
}

fn ratio_gt(x: &(u64, u64), y: &(u64, u64)) -> bool {
    x.1 as u128 * y.0 as u128 > y.1 as u128 * x.0 as u128
}

#[derive(Clone, Debug)]
pub struct RatioTestConfig {
    /// Fraction of the ratio sequence, counted from the end, that forms the tail.
    pub tail_fraction: Rational,
}

impl Default for RatioTestConfig {
    fn default() -> Self {
        RatioTestConfig {
            tail_fraction: Rational::new(1, 2),
        }
    }
}

pub fn ratio_test(b: &IntegerSet, targets: &[Rational]) -> Result<SparsenessVerdict> {
    ratio_test_with(b, targets, &RatioTestConfig::default())
}

/// Ratio-form surrogate.
///
/// * sparse-consistent: every target is eventually exceeded; or the tail sets
///   new ratio records and every target not yet exceeded lies above every
///   observed ratio (the horizon is too short to reach it).
/// * not-sparse: the tail sets no new record and stays at or below some target.
/// * inconclusive: anything else.
pub fn ratio_test_with(
    b: &IntegerSet,
    targets: &[Rational],
    config: &RatioTestConfig,
) -> Result<SparsenessVerdict> {
    if b.len() < 2 {
        return Err(Error::Input(format!(
            "ratio test needs at least 2 elements, got {} (finite sets are sparse by definition)",
            b.len()
        )));
    }
    if b.min() == Some(0) {
        return Err(Error::Input("ratio test needs positive elements".into()));
    }
    if targets.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Input("ratio targets must be increasing".into()));
    }
    let ratios = consecutive_ratios(b);
    let m = ratios.len();
    let outcomes: Vec<TargetOutcome> = targets
        .iter()
        .map(|t| {
            let last_low = ratios
                .iter()
                .rposition(|r| ratio_cmp(r, t) != Ordering::Greater);
            let exceeded_from = match last_low {
                None => Some(1),
                Some(i) if i + 1 < m => Some(i + 2),
                Some(_) => None,
            };
            TargetOutcome {
                target: *t,
                exceeded_from,
            }
        })
        .collect();
    let scanned = ScannedRange::Indices { first: 1, last: m };

    if outcomes.iter().all(|o| o.exceeded_from.is_some()) {
        return Ok(SparsenessVerdict {
            verdict: Verdict::SparseConsistent,
            witness: None,
            scanned,
            targets: outcomes,
        });
    }

    let tail_len = ((rational::ceil(&(config.tail_fraction * Rational::from_integer(m as u64))))
        as usize)
        .clamp(1, m);
    let tail_start = m - tail_len;
    let arg_max = |range: std::ops::Range<usize>| {
        range.fold(None::<usize>, |best, i| match best {
            Some(j) if !ratio_gt(&ratios[i], &ratios[j]) => Some(j),
            _ => Some(i),
        })
    };
    let tail_max = arg_max(tail_start..m).expect("tail is non-empty");
    let growing = match arg_max(0..tail_start) {
        None => true,
        Some(head_max) => ratio_gt(&ratios[tail_max], &ratios[head_max]),
    };
    let overall_max = arg_max(0..m).expect("non-empty");

    if !growing {
        if let Some(bound) = targets
            .iter()
            .find(|t| ratio_cmp(&ratios[tail_max], t) != Ordering::Greater)
        {
            let (b_j, b_next) = ratios[tail_max];
            return Ok(SparsenessVerdict {
                verdict: Verdict::NotSparse,
                witness: Some(Witness::RatioTail {
                    index: tail_max + 1,
                    b_j,
                    b_next,
                    bound: *bound,
                }),
                scanned,
                targets: outcomes,
            });
        }
    }
    let unreached_only = outcomes
        .iter()
        .filter(|o| o.exceeded_from.is_none())
        .all(|o| ratio_cmp(&ratios[overall_max], &o.target) != Ordering::Greater);
    let verdict = if growing && unreached_only {
        Verdict::SparseConsistent
    } else {
        Verdict::Inconclusive
    };
    Ok(SparsenessVerdict {
        verdict,
        witness: None,
        scanned,
        targets: outcomes,
    })
}

/// Largest `a <= cap` whose check window `f(a) + a + g(a)` fits in `horizon`,
/// assuming `f` and `g` non-decreasing.
pub fn max_checkable_a(rates: &SparsenessRates, horizon: u64, cap: u64) -> Option<u64> {
    let fits = |a: u64| matches!(rates.window_end(a), Ok(end) if end <= horizon);
    if cap == 0 || !fits(1) {
        return None;
    }
    let (mut lo, mut hi) = (1u64, cap);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Some(lo)
}

/// Every `a` in `[lo, hi]` at which the gap condition fails, with a witness
/// pair for each. Consecutive pairs suffice: `b_s - b_t >= b_{t+1} - b_t`.
pub fn psr_violations(
    b: &IntegerSet,
    rates: &SparsenessRates,
    lo: u64,
    hi: u64,
) -> Result<Vec<Witness>> {
    if lo == 0 || lo > hi {
        return Err(Error::Precondition(format!("bad a-range [{lo}, {hi}]")));
    }
    let needed = rates.window_end(hi)?;
    if b.horizon() < needed {
        return Err(Error::Precondition(format!(
            "set known only up to {}, but checking a in [{lo}, {hi}] needs {needed}",
            b.horizon()
        )));
    }
    let xs = b.elements();
    // suffix minimum of gaps xs[t+1] - xs[t], with its position
    let mut suffix: Vec<(u64, usize)> = vec![(u64::MAX, usize::MAX); xs.len()];
    for t in (0..xs.len().saturating_sub(1)).rev() {
        let here = (xs[t + 1] - xs[t], t);
        let next = suffix[t + 1];
        suffix[t] = if here.0 <= next.0 { here } else { next };
    }
    let mut out = Vec::new();
    for a in lo..=hi {
        let end = rates.window_end(a)?;
        if end > b.horizon() {
            return Err(Error::Precondition(format!(
                "set known only up to {}, but a = {a} needs {end} (f or g decreasing?)",
                b.horizon()
            )));
        }
        let (fa, gap) = (rates.f_at(a)?, rates.min_gap(a)?);
        let t0 = xs.partition_point(|&x| x <= fa);
        if t0 >= xs.len() {
            continue;
        }
        let (min_gap, t) = suffix[t0];
        if min_gap < gap {
            out.push(Witness::PsrViolation {
                a,
                b_t: xs[t],
                b_s: xs[t + 1],
            });
        }
    }
    Ok(out)
}

/// Checks the gap condition for every `a` in `[lo, hi]`.
pub fn psr_check(
    b: &IntegerSet,
    rates: &SparsenessRates,
    lo: u64,
    hi: u64,
) -> Result<SparsenessVerdict> {
    let violations = psr_violations(b, rates, lo, hi)?;
    let witness = violations.into_iter().next();
    Ok(SparsenessVerdict {
        verdict: if witness.is_some() {
            Verdict::NotSparse
        } else {
            Verdict::SparseConsistent
        },
        witness,
        scanned: ScannedRange::A { lo, hi },
        targets: Vec::new(),
    })
}

/// Least 1-based `j0 >= 2` such that the gaps `d_j = b_j - b_{j-1}` are
/// strictly increasing for all `j >= j0`, with `d_{j0}`. Needs at least one
/// strict increase in the tail.
pub fn gap_tail_start(b: &IntegerSet) -> Result<(usize, u64)> {
    let xs = b.elements();
    if xs.len() < 3 {
        return Err(Error::Input(format!(
            "need at least 3 elements to read gaps, got {}",
            xs.len()
        )));
    }
    // gaps[i] = d_{i+2} in 1-based terms
    let gaps: Vec<u64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let last_drop = gaps.windows(2).rposition(|w| w[0] >= w[1]);
    let start = match last_drop {
        None => 0,
        Some(i) => i + 1,
    };
    if start + 1 >= gaps.len() {
        let i = last_drop.expect("a drop exists");
        return Err(Error::NotSparse(format!(
            "gaps do not increase at the end of the scanned prefix: d_{} = {} >= d_{} = {}",
            i + 2,
            gaps[i],
            i + 3,
            gaps[i + 1]
        )));
    }
    Ok((start + 2, gaps[start]))
}

pub fn psr_from_ratios(b: &IntegerSet) -> Result<SparsenessRates> {
    psr_from_ratios_with(b, &Rational::new(1, 2))
}

/// Builds the piecewise-constant rate
///
/// ```text
/// f(a) = 1         if a <= d_{j0}
/// f(a) = b_{j-1}   if d_j < a <= d_{j+1}, j >= j0
/// ```
///
/// with `g ≡ 0`, from the gap tail found by [`gap_tail_start`]. Past the
/// last scanned gap the top band is extended. The gap condition holds for
/// every `a > d_{j0}`; the result is uncertified. Fails when `f(a)/a`
/// exceeds `eps` at the start of the top band.
pub fn psr_from_ratios_with(b: &IntegerSet, eps: &Rational) -> Result<SparsenessRates> {
    let (j0, d_j0) = gap_tail_start(b)?;
    let xs = b.elements();
    if xs[0] == 0 {
        return Err(Error::Input("sets must be positive".into()));
    }
    let d = |j: usize| xs[j - 1] - xs[j - 2]; // d_j, 1-based
    let mut rows = vec![(1u64, Rational::from_integer(1))];
    let m = xs.len();
    for j in j0..m {
        let start = d(j) + 1;
        let value = Rational::from_integer(xs[j - 2]);
        if start <= 1 {
            rows[0].1 = value;
        } else {
            rows.push((start, value));
        }
    }
    debug_assert!(d_j0 == d(j0));
    let (top_start, top_value) = *rows.last().unwrap();
    let top_value = rational::floor(&top_value);
    if !rational::ratio_at_most(top_value, top_start, eps) {
        return Err(Error::NotSparse(format!(
            "f(a)/a = {top_value}/{top_start} at the top band exceeds {}; gaps grow too slowly \
             relative to the elements",
            rational::format_rational(eps)
        )));
    }
    let table = Table::new(rows)?;
    Ok(SparsenessRates::new(Expr::table(table), Expr::int(0)))
}
