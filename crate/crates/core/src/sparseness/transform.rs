//! Operations that carry a set and its rates to a new set with known rates.

use super::construct::{least_a_reaching, Reach};
use super::rates::{Expr, SparsenessRates};
use crate::error::{Error, Result};
use crate::sets::IntegerSet;

/// `(F, G) ↦ (a ↦ F(2a), a ↦ a + G(a))`.
///
/// Above `F(2a)` gaps are at least `2a + G(2a) >= a + (a + G(a))`, so the
/// new pair holds on the same tail and `g` now grows without bound.
pub fn strengthen_psr(rates: &SparsenessRates) -> Result<SparsenessRates> {
    let doubled = Expr::int(2) * Expr::Var;
    let out = SparsenessRates {
        f: rates.f.substitute(&doubled),
        g: Expr::Var + rates.g.clone(),
        certified_from: rates.certified_from,
    };
    // surface overflow of F(2a) at the bottom of the range right away
    out.f_at(out.certified_from.unwrap_or(1))?;
    Ok(out)
}

/// `(B + k, (f + k, g))`.
pub fn shift_up(
    b: &IntegerSet,
    k: u64,
    rates: &SparsenessRates,
) -> Result<(IntegerSet, SparsenessRates)> {
    let shifted = b.translate_up(k)?;
    let out = SparsenessRates {
        f: rates.f.clone() + Expr::int(k),
        g: rates.g.clone(),
        certified_from: rates.certified_from,
    };
    Ok((shifted, out))
}

/// `((B - k) ∩ ℕ, (f, g))` with `ℕ = {1, 2, …}`.
pub fn shift_down(
    b: &IntegerSet,
    k: u64,
    rates: &SparsenessRates,
) -> (IntegerSet, SparsenessRates) {
    let shifted = b
        .translate_down(k, false)
        .expect("translating down keeps the set valid");
    (shifted, rates.clone())
}

/// `((B \ [1, max A]) ∪ A, (f, g))`.
///
/// The rates only carry over for `a` with `f(a) > max A`, so a certified
/// threshold is raised to the least such `a` (and dropped if `f` never gets there).
pub fn replace_prefix(
    b: &IntegerSet,
    a: &IntegerSet,
    rates: &SparsenessRates,
) -> Result<(IntegerSet, SparsenessRates)> {
    let max_a = a
        .max()
        .ok_or_else(|| Error::Precondition("replacement prefix must be non-empty".into()))?;
    let kept = b.iter().filter(|&x| x > max_a).chain(a.iter()).collect();
    let horizon = b.horizon().max(a.horizon());
    let set = IntegerSet::new(kept, horizon)?;
    let certified_from = match rates.certified_from {
        None => None,
        Some(c) => match least_a_reaching(rates, max_a + 1) {
            Reach::At(first) => Some(c.max(first)),
            Reach::Overflow { .. } | Reach::Bounded => None,
        },
    };
    Ok((
        set,
        SparsenessRates {
            f: rates.f.clone(),
            g: rates.g.clone(),
            certified_from,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use crate::sets::SetGenerator;
    use crate::sparseness::factorial_rates;

    fn rates(f: &str, g: &str) -> SparsenessRates {
        SparsenessRates::new(Expr::parse(f).unwrap(), Expr::parse(g).unwrap())
    }

    #[test]
    fn strengthen_examples() {
        let c = strengthen_psr(&rates("7", "0")).unwrap();
        for a in [1, 10, 1000] {
            assert_eq!(c.f_at(a).unwrap(), 7);
            assert_eq!(c.g_at(a).unwrap(), Rational::from_integer(a));
        }
        let id = strengthen_psr(&rates("a", "a").certified(5)).unwrap();
        assert_eq!(id.certified_from, Some(5));
        for a in [1, 10, 1000] {
            assert_eq!(id.f_at(a).unwrap(), 2 * a);
            assert_eq!(id.g_at(a).unwrap(), Rational::from_integer(2 * a));
        }
        assert!(strengthen_psr(&rates("a*a*a", "0").certified(1 << 40)).is_err());
    }

    #[test]
    fn shift_examples() {
        let b = IntegerSet::new(vec![1, 2, 6, 24], 24).unwrap();
        let r = factorial_rates();
        let (up, r_up) = shift_up(&b, 10, &r).unwrap();
        assert_eq!(up.elements(), &[11, 12, 16, 34]);
        for a in [1, 50, 500] {
            assert_eq!(r_up.f_at(a).unwrap(), r.f_at(a).unwrap() + 10);
        }
        let (down, r_down) = shift_down(&up, 10, &r_up);
        assert_eq!(down.elements(), b.elements());
        assert_eq!(r_down, r_up);
        let (gone, _) = shift_down(&IntegerSet::new(vec![1, 2, 6], 10).unwrap(), 6, &r);
        assert!(gone.is_empty());
        let (empty_up, r_e) = shift_up(&IntegerSet::empty(5).unwrap(), 3, &r).unwrap();
        assert!(empty_up.is_empty());
        assert_eq!(r_e.g, r.g);
    }

    #[test]
    fn replace_prefix_examples() {
        let b = SetGenerator::Factorials.materialize(1_000_000).unwrap();
        let a = IntegerSet::new(vec![5, 7], 10).unwrap();
        let r = factorial_rates();
        let (out, r_out) = replace_prefix(&b, &a, &r).unwrap();
        assert_eq!(&out.elements()[..4], &[5, 7, 24, 120]);
        // least a with f(a) > 7 is the start of the band with f = 24
        assert_eq!(r_out.certified_from, Some(97));
        let own = b.truncate(24).unwrap();
        let (same, _) = replace_prefix(&b, &own, &r).unwrap();
        assert_eq!(same, b);
        assert!(replace_prefix(&b, &IntegerSet::empty(3).unwrap(), &r).is_err());
    }
}
