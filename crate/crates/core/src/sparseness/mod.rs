//! Highly sparse sets.
//!
//! Two characterizations are implemented side by side: the ratio form
//! (`b_{j+1}/b_j → ∞`) and the rate form (a pair `(f, g)` with `f(a)/a → 0`
//! such that elements of `B` above `f(a)` are pairwise at least `a + g(a)`
//! apart once `a` is large). Both are asymptotic, so every check here is a
//! finite-horizon surrogate that reports what it scanned.

mod construct;
mod rates;
mod transform;
mod verdict;

pub use construct::{construct_from_psr, least_a_reaching};
pub use rates::{Expr, SparsenessRates, Table};
pub use transform::{replace_prefix, shift_down, shift_up, strengthen_psr};
pub use verdict::{
    consecutive_ratios, gap_tail_start, max_checkable_a, psr_check, psr_from_ratios,
    psr_from_ratios_with, psr_violations, ratio_test, ratio_test_with, RatioTestConfig,
    ScannedRange, SparsenessVerdict, TargetOutcome, Verdict, Witness,
};

use crate::error::Result;
use crate::rational::Rational;
use crate::sets::{read_set, SetGenerator};

/// `f ≡ c, g(a) = a`: makes the gap condition vacuous for any set with
/// largest element `c`.
pub fn finite_rates(max: u64) -> SparsenessRates {
    SparsenessRates::new(Expr::int(max.max(1)), Expr::Var).certified(1)
}

/// Rates for the factorials, certified for every `a >= 1`.
///
/// `f` is the step function `f(a) = (m-1)!` for `m! - (m-1)! < a <= (m+1)! - m!`
/// (and 1 below), `g ≡ 0`. Elements above `(m-1)!` are `m!, (m+1)!, …`, whose
/// consecutive gaps are at least `(m+1)! - m! >= a`.
pub fn factorial_rates() -> SparsenessRates {
    let mut rows = vec![(1u64, Rational::from_integer(1))];
    let mut prev: u64 = 1; // (m-1)!
    for m in 2u64.. {
        let Some(fact) = prev.checked_mul(m) else {
            break;
        };
        rows.push((fact - prev + 1, Rational::from_integer(prev)));
        prev = fact;
    }
    let table = Table::new(rows).expect("factorial breakpoints increase");
    SparsenessRates::new(Expr::table(table), Expr::int(0)).certified(1)
}

/// The rates a generator carries on its own, if it is highly sparse.
///
/// Powers and geometric progressions have none. A set file is treated as a
/// finite set.
pub fn builtin_rates(generator: &SetGenerator) -> Result<Option<SparsenessRates>> {
    Ok(match generator {
        SetGenerator::Finite(xs) => Some(finite_rates(xs.iter().copied().max().unwrap_or(1))),
        SetGenerator::Factorials => Some(factorial_rates()),
        SetGenerator::Powers(_) | SetGenerator::Geometric(_) => None,
        // the recursive construction meets the gap condition for every a >= 1
        SetGenerator::Psr { rates, .. } => Some(rates.clone().certified(1)),
        SetGenerator::File(path) => {
            let set = read_set(path, None)?;
            Some(finite_rates(set.max().unwrap_or(1)))
        }
    })
}
