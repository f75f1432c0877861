//! Sets `A` whose sumset with `B` has lower density `alpha` and upper density `beta`.
//!
//! Starting from `C` with `d(C + B) = beta`, blocks of `C` are dropped until
//! the ratio dips below `alpha + gamma_{k+1}` (odd steps), then left alone
//! until it climbs back above `beta - 1/k` (even steps).

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{decimal, format_rational, Rational, SignedRatio};
use crate::sets::{Bits, IntegerSet};

/// `gamma_k = (beta - alpha) / (k + 1)`.
pub fn gamma(alpha: &Rational, beta: &Rational, k: u64) -> SignedRatio {
    let diff = SignedRatio::from_rational(beta) - SignedRatio::from_rational(alpha);
    SignedRatio {
        num: diff.num,
        den: diff.den * (k as i128 + 1),
    }
    .reduced()
}

/// `alpha + gamma_k`.
fn floor_at(alpha: &Rational, beta: &Rational, k: u64) -> SignedRatio {
    SignedRatio::from_rational(alpha) + gamma(alpha, beta, k)
}

/// `beta - 1/k`.
fn ceiling_at(beta: &Rational, k: u64) -> SignedRatio {
    SignedRatio::from_rational(beta)
        - SignedRatio {
            num: 1,
            den: k as i128,
        }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of(k: u64) -> Self {
        if k % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        }
    }
}

/// A point `n` where `(C_{k+1} \ {n_{k+1}} + B)(n) = count < (alpha + gamma_{k+1})·n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Dip {
    pub n: u64,
    pub count: u64,
}

/// Result of step `k`: the new checkpoint `n = n_{k+1}` and
/// `count = (C_{k+1} + B)(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Checkpoint {
    pub k: u64,
    pub parity: Parity,
    pub n: u64,
    pub count: u64,
    /// Set on odd steps.
    pub dip: Option<Dip>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OscillationReport {
    pub alpha: String,
    pub beta: String,
    pub horizon: u64,
    /// `N`: `(C + B)(n) >= (alpha + gamma_1)·n` for every `n` in `[N, H]`.
    pub threshold: u64,
    pub checkpoints: Vec<Checkpoint>,
    /// Why the recursion stopped before the horizon ran out, if it did.
    pub stall: Option<String>,
}

impl OscillationReport {
    /// Last step that completed, 0 if none.
    pub fn completed(&self) -> u64 {
        self.checkpoints.last().map_or(0, |c| c.k)
    }

    /// CSV `k,parity,n_k,ratio`; row `k` holds the checkpoint produced by
    /// step `k` and `(C_{k+1} + B)(n)/n` there.
    pub fn to_csv(&self, header: &[String]) -> String {
        let mut out = String::new();
        for line in header {
            let _ = writeln!(out, "# {line}");
        }
        out.push_str("k,parity,n_k,ratio\n");
        for c in &self.checkpoints {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                c.k,
                c.parity.as_str(),
                c.n,
                decimal(c.count, c.n, 12)
            );
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Oscillation {
    /// `A ⊂ [1, H]`.
    pub set: IntegerSet,
    /// `(A + B) ∩ [1, H]`.
    pub sumset: IntegerSet,
    pub report: OscillationReport,
}

/// Snapshot of the recursion after `k - 1` steps.
#[derive(Clone, Debug)]
pub struct OscillationState {
    pub k: u64,
    pub c: IntegerSet,
    pub n_k: u64,
    pub threshold: u64,
    pub alpha: Rational,
    pub beta: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    /// Odd step: `(C_k ∩ [1, n_k] + B)(u)/u < alpha + gamma_{k+1}`.
    Dip {
        u: u64,
    },
    /// Even step: `(C_k + B)(n)/n > beta - 1/k`.
    Recovery {
        n: u64,
    },
    NotFound {
        parity: Parity,
        searched_to: u64,
    },
}

/// Checks that step `state.k` can be taken within the horizon of `state.c`.
pub fn verify_well_defined(state: &OscillationState, b: &IntegerSet) -> Result<Diagnostic> {
    let h = state.c.horizon();
    let ctx = Context::new(b, h)?;
    let parity = Parity::of(state.k);
    let found = match parity {
        Parity::Odd => {
            let mut prefix = state.c.to_bits(ctx.len);
            prefix.clear_range(state.n_k as usize + 1, ctx.len - 1);
            let target = floor_at(&state.alpha, &state.beta, state.k + 1);
            let from = state.threshold.max(state.n_k) + 1;
            ctx.first(&ctx.sum(&prefix), from, h, |c, n| {
                target.cmp_ratio(c, n) == Ordering::Less
            })
            .map(|(u, _)| Diagnostic::Dip { u })
        }
        Parity::Even => {
            let target = ceiling_at(&state.beta, state.k);
            let sums = ctx.sum(&state.c.to_bits(ctx.len));
            ctx.first(&sums, state.n_k + 1, h, |c, n| {
                target.cmp_ratio(c, n) == Ordering::Greater
            })
            .map(|(n, _)| Diagnostic::Recovery { n })
        }
    };
    Ok(found.unwrap_or(Diagnostic::NotFound {
        parity,
        searched_to: h,
    }))
}

/// Sumsets with a fixed `B` and prefix scans over `[0, H]`.
struct Context {
    shifts: Vec<usize>,
    len: usize,
}

impl Context {
    fn new(b: &IntegerSet, h: u64) -> Result<Self> {
        if b.horizon() < h {
            return Err(Error::Precondition(format!(
                "B known only up to {}, horizon is {h}",
                b.horizon()
            )));
        }
        if h >= crate::sets::DENSE_LIMIT {
            return Err(Error::Input(format!(
                "horizon {h} exceeds the dense limit {}",
                crate::sets::DENSE_LIMIT
            )));
        }
        Ok(Context {
            shifts: b
                .iter()
                .take_while(|&x| x <= h)
                .map(|x| x as usize)
                .collect(),
            len: h as usize + 1,
        })
    }

    fn sum(&self, c: &Bits) -> Bits {
        let mut acc = Bits::new(self.len);
        for &x in &self.shifts {
            acc.or_shifted(c, x);
        }
        acc
    }

    /// Least `n` in `[from, to]` with `hit(S(n), n)`, where `S(n)` counts `[1, n]`.
    fn first(
        &self,
        s: &Bits,
        from: u64,
        to: u64,
        hit: impl Fn(u64, u64) -> bool,
    ) -> Option<(u64, u64)> {
        if from > to {
            return None;
        }
        let from = from.max(1);
        let mut count = ones_between(s, 1, from - 1);
        for n in from..=to {
            count += u64::from(s.get(n as usize));
            if hit(count, n) {
                return Some((n, count));
            }
        }
        None
    }

    /// Largest `n` in `[1, to]` with `hit(S(n), n)`.
    fn last(&self, s: &Bits, to: u64, hit: impl Fn(u64, u64) -> bool) -> Option<u64> {
        let mut count = 0;
        let mut found = None;
        for n in 1..=to {
            count += u64::from(s.get(n as usize));
            if hit(count, n) {
                found = Some(n);
            }
        }
        found
    }
}

fn ones_between(s: &Bits, lo: u64, hi: u64) -> u64 {
    s.count_range(lo as usize, hi as usize)
}

/// Runs the recursion on `[1, H]` and returns `A = C_k` for the last `k`
/// reached.
///
/// `B` must look density-zero on the horizon (`B(H)/H <= B(H/2)/(H/2)` and
/// `B(H)/H < gamma_1`), and `C + B` must stay above `alpha + gamma_1` on some
/// tail `[N, H]`.
pub fn build_oscillating(
    alpha: &Rational,
    beta: &Rational,
    b: &IntegerSet,
    c: &IntegerSet,
    horizon: u64,
) -> Result<Oscillation> {
    let one = Rational::from_integer(1);
    if alpha > beta || *beta > one {
        return Err(Error::Input(format!(
            "need 0 <= alpha <= beta <= 1, got alpha = {}, beta = {}",
            format_rational(alpha),
            format_rational(beta)
        )));
    }
    if horizon == 0 {
        return Err(Error::Input("horizon must be at least 1".into()));
    }
    if c.horizon() < horizon {
        return Err(Error::Precondition(format!(
            "C known only up to {}, horizon is {horizon}",
            c.horizon()
        )));
    }
    let h = horizon;
    let ctx = Context::new(b, h)?;
    let mut report = OscillationReport {
        alpha: format_rational(alpha),
        beta: format_rational(beta),
        horizon: h,
        threshold: 1,
        checkpoints: Vec::new(),
        stall: None,
    };
    let mut cur = c.truncate(h)?.to_bits(ctx.len);
    let mut sums = ctx.sum(&cur);
    if alpha == beta {
        return Ok(Oscillation {
            set: IntegerSet::from_bits(&cur, h),
            sumset: IntegerSet::from_bits(&sums, h),
            report,
        });
    }

    let half = h.div_ceil(2);
    let (b_full, b_half) = (b.count(h)?, b.count(half)?);
    let gamma_1 = gamma(alpha, beta, 1);
    if (b_full as u128) * (half as u128) > (b_half as u128) * (h as u128)
        || gamma_1.cmp_ratio(b_full, h) != Ordering::Less
    {
        return Err(Error::Infeasible(format!(
            "B does not look density-zero on [1, {h}]: B({half}) = {b_half}, B({h}) = {b_full}, \
             gamma_1 = {:.6}",
            gamma_1.to_f64()
        )));
    }

    let first_floor = floor_at(alpha, beta, 1);
    let below = |f: SignedRatio| move |count: u64, n: u64| f.cmp_ratio(count, n) == Ordering::Less;
    let threshold = match ctx.last(&sums, h, below(first_floor)) {
        None => 1,
        Some(n) if n == h => {
            return Err(Error::Infeasible(format!(
                "(C + B)(H)/H = {} is below alpha + gamma_1 = {:.6}; C + B does not reach the \
                 required density",
                decimal(ones_between(&sums, 1, h), h, 6),
                first_floor.to_f64()
            )))
        }
        Some(n) => n + 1,
    };
    report.threshold = threshold;

    let mut n_k = 1u64;
    let mut k = 1u64;
    loop {
        if n_k >= h {
            report.stall = Some(format!(
                "step {k}: checkpoint n_k = {n_k} reached the horizon"
            ));
            break;
        }
        match Parity::of(k) {
            Parity::Odd => {
                let target = floor_at(alpha, beta, k + 1);
                let dip = |u: u64| {
                    let mut d = cur.clone();
                    d.clear_range(n_k as usize + 1, u as usize);
                    ctx.first(&ctx.sum(&d), threshold, h, below(target))
                };
                if dip(h).is_none() {
                    report.stall = Some(format!(
                        "step {k}: dropping all of ({n_k}, {h}] never takes the ratio below {:.6}",
                        target.to_f64()
                    ));
                    break;
                }
                let (mut lo, mut hi) = (n_k + 1, h);
                while lo < hi {
                    let mid = lo + (hi - lo) / 2;
                    if dip(mid).is_some() {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                let (wn, wc) = dip(lo).expect("bisection keeps a dipping endpoint");
                cur.clear_range(n_k as usize + 1, lo as usize - 1);
                sums = ctx.sum(&cur);
                n_k = lo;
                report.checkpoints.push(Checkpoint {
                    k,
                    parity: Parity::Odd,
                    n: n_k,
                    count: ones_between(&sums, 1, n_k),
                    dip: Some(Dip { n: wn, count: wc }),
                });
            }
            Parity::Even => {
                let target = ceiling_at(beta, k);
                let above = |count: u64, n: u64| target.cmp_ratio(count, n) == Ordering::Greater;
                let Some((n, count)) = ctx.first(&sums, n_k + 1, h, above) else {
                    report.stall = Some(format!(
                        "step {k}: ratio never climbs above beta - 1/{k} = {:.6} in ({n_k}, {h}]",
                        target.to_f64()
                    ));
                    break;
                };
                n_k = n;
                report.checkpoints.push(Checkpoint {
                    k,
                    parity: Parity::Even,
                    n,
                    count,
                    dip: None,
                });
            }
        }
        k += 1;
    }
    Ok(Oscillation {
        set: IntegerSet::from_bits(&cur, h),
        sumset: IntegerSet::from_bits(&sums, h),
        report,
    })
}
