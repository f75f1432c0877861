//! Greedy complements: sets `A` with `d(A + B) = alpha` for highly sparse `B`.

mod greedy;
mod tree;

pub use greedy::{Audit, Greedy, GreedyParams, GreedyTrace, Step};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::sets::{density_profile, sumset, DensityProfile, IntegerSet, SetGenerator};
use crate::sparseness::{
    max_checkable_a, psr_violations, shift_down, strengthen_psr, SparsenessRates, Witness,
};

/// Least `N <= horizon` with `g(N) + 1 >= 1/alpha` from which the gap
/// condition holds: certified by `rates`, or else checked against `b`
/// for every `a` in `[N, horizon]` whose window `b` covers.
pub fn choose_threshold(
    alpha: &Rational,
    rates: &SparsenessRates,
    b: Option<&IntegerSet>,
    horizon: u64,
) -> Result<u64> {
    let (p, q) = (*alpha.numer(), *alpha.denom());
    if p == 0 || p >= q {
        return Err(Error::Precondition("threshold needs 0 < alpha < 1".into()));
    }
    if horizon == 0 {
        return Err(Error::Precondition("horizon must be at least 1".into()));
    }
    // g(a) + 1 >= q/p  <=>  g(a) >= (q - p)/p
    let need = Rational::new(q - p, p);
    let enough = |a: u64| -> Result<bool> { Ok(rates.g_at(a)? >= need) };
    if !enough(horizon)? {
        return Err(Error::Infeasible(format!(
            "g(a) + 1 >= 1/alpha = {} fails for every a <= {horizon} (g({horizon}) = {})",
            format_rational(&alpha.recip()),
            format_rational(&rates.g_at(horizon)?)
        )));
    }
    let (mut lo, mut hi) = (1u64, horizon);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if enough(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let from_g = lo;
    let n = match (rates.certified_from, b) {
        (Some(c), _) => from_g.max(c),
        (None, Some(b)) => {
            let cap = max_checkable_a(rates, b.horizon(), horizon)
                .filter(|&cap| cap >= from_g)
                .ok_or_else(|| {
                    Error::Infeasible(format!(
                        "gap condition cannot be checked from a = {from_g}: set known only up to {}",
                        b.horizon()
                    ))
                })?;
            let violations = psr_violations(b, rates, from_g, cap)?;
            match violations.last() {
                Some(Witness::PsrViolation { a, .. }) => *a + 1,
                _ => from_g,
            }
        }
        (None, None) => {
            return Err(Error::Infeasible(
                "rates carry no certified threshold and no set was given to check them".into(),
            ))
        }
    };
    if n > horizon {
        return Err(Error::Infeasible(format!(
            "gap condition fails up to a = {}; no threshold within horizon {horizon}",
            n - 1
        )));
    }
    Ok(n)
}

/// Output of [`build_complement`].
#[derive(Clone, Debug)]
pub struct Complement {
    /// `A ⊂ [1, H]`.
    pub set: IntegerSet,
    pub trace: GreedyTrace,
    /// `(A + B) ∩ [1, H]`.
    pub sumset: IntegerSet,
    pub profile: DensityProfile,
}

/// Builds `A ⊂ [1, H]` with `(A + B)(n)/n -> alpha`.
///
/// The rates are strengthened so that `g -> ∞`, `B` is shifted down by
/// `m = min B` to `B0 ∋ 0`, the greedy runs far enough that its choices
/// below `H + m` are final, and the result is shifted back down by `m`.
pub fn build_complement(
    alpha: &Rational,
    b: &SetGenerator,
    rates: &SparsenessRates,
    horizon: u64,
    stride: u64,
) -> Result<Complement> {
    if *alpha > Rational::from_integer(1) {
        return Err(Error::Input(format!(
            "alpha must lie in [0, 1], got {}",
            format_rational(alpha)
        )));
    }
    let b_h = b.materialize(horizon)?;
    let finish = |set: IntegerSet, trace: GreedyTrace| -> Result<Complement> {
        let sums = sumset(&set, &b_h, horizon)?;
        let profile = density_profile(&sums, stride)?;
        Ok(Complement {
            set,
            trace,
            sumset: sums,
            profile,
        })
    };
    if *alpha.numer() == 0 {
        return finish(
            IntegerSet::empty(horizon)?,
            GreedyTrace::short_circuit(horizon),
        );
    }
    if alpha.numer() == alpha.denom() {
        return finish(
            IntegerSet::interval(1, horizon, horizon)?,
            GreedyTrace::short_circuit(horizon),
        );
    }
    let m = b_h
        .min()
        .ok_or_else(|| Error::Input(format!("B has no element in [1, {horizon}]")))?;

    let strong = strengthen_psr(rates)?;
    let target = horizon
        .checked_add(m)
        .ok_or_else(|| Error::Overflow("horizon + min B".into()))?;
    let work = strong
        .f_at(target)?
        .checked_add(target)
        .ok_or_else(|| Error::Overflow("greedy work range".into()))?;
    let materialize_to = work
        .checked_add(m)
        .ok_or_else(|| Error::Overflow("greedy work range".into()))?;
    let (b_shifted, _) = shift_down(&b.materialize(materialize_to)?, m, rates);
    let threshold = choose_threshold(alpha, &strong, Some(&b_shifted), target)?;
    let mut b0 = Vec::with_capacity(b_shifted.len() + 1);
    b0.push(0);
    b0.extend_from_slice(b_shifted.elements());
    let b0 = IntegerSet::from_sorted(b0, work)?;

    let params = GreedyParams {
        alpha: *alpha,
        rates: strong,
        threshold,
        horizon: work,
    };
    let (mut trace, _) = Greedy::new(params, &b0)?.run()?;
    if trace.chosen.is_empty() {
        return Err(Error::Exhausted(format!(
            "no admissible first element in [{threshold}, {}]",
            trace.last_candidate
        )));
    }
    trace.shift = m;
    let set: Vec<u64> = trace
        .chosen
        .iter()
        .filter(|&&a| a > m && a - m <= horizon)
        .map(|&a| a - m)
        .collect();
    finish(IntegerSet::from_sorted(set, horizon)?, trace)
}
