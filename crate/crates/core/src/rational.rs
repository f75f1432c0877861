//! Exact rational parameters.
//!
//! Densities are compared as `count / n <= p / q` by cross multiplication in
//! `u128`, so no comparison ever goes through floating point.

use std::cmp::Ordering;

use num_traits::{CheckedAdd, CheckedMul};

use crate::error::{Error, Result};

pub type Rational = num_rational::Ratio<u64>;

/// Parses `p/q` or a bare integer. Decimal notation is rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Input(format!("expected a rational `p/q`, got {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|c| c.is_ascii_digit());
    if !all_digits(num) || !all_digits(den) {
        return Err(bad());
    }
    let num: u64 = num.parse().map_err(|_| bad())?;
    let den: u64 = den.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(Error::Input(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Parses a rational and checks `0 <= r <= 1`.
pub fn parse_unit_rational(text: &str) -> Result<Rational> {
    let r = parse_rational(text)?;
    if r > Rational::from_integer(1) {
        return Err(Error::Input(format!("{text:?} is not in [0, 1]")));
    }
    Ok(r)
}

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Compares `count / n` against `r` exactly. `n` must be positive.
pub fn cmp_ratio(count: u64, n: u64, r: &Rational) -> Ordering {
    debug_assert!(n > 0);
    let lhs = count as u128 * *r.denom() as u128;
    let rhs = *r.numer() as u128 * n as u128;
    lhs.cmp(&rhs)
}

/// `count <= r * n`.
pub fn ratio_at_most(count: u64, n: u64, r: &Rational) -> bool {
    cmp_ratio(count, n, r) != Ordering::Greater
}

pub fn ceil(r: &Rational) -> u64 {
    let (n, d) = (*r.numer(), *r.denom());
    n / d + u64::from(n % d != 0)
}

pub fn floor(r: &Rational) -> u64 {
    r.numer() / r.denom()
}

pub(crate) fn checked_add(x: &Rational, y: &Rational) -> Result<Rational> {
    x.checked_add(y)
        .ok_or_else(|| Error::Overflow(format!("{} + {}", format_rational(x), format_rational(y))))
}

pub(crate) fn checked_mul(x: &Rational, y: &Rational) -> Result<Rational> {
    x.checked_mul(y)
        .ok_or_else(|| Error::Overflow(format!("{} * {}", format_rational(x), format_rational(y))))
}

/// A rational with a signed numerator, used for thresholds such as `beta - 1/k`
/// that can go negative. The denominator is always positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedRatio {
    pub num: i128,
    pub den: i128,
}

impl SignedRatio {
    pub fn from_rational(r: &Rational) -> Self {
        SignedRatio {
            num: *r.numer() as i128,
            den: *r.denom() as i128,
        }
    }

    pub(crate) fn reduced(self) -> Self {
        let g = gcd(self.num.unsigned_abs(), self.den.unsigned_abs()).max(1) as i128;
        SignedRatio {
            num: self.num / g,
            den: self.den / g,
        }
    }

    /// Exact comparison of `count / n` against `self`.
    pub fn cmp_ratio(&self, count: u64, n: u64) -> Ordering {
        (count as i128 * self.den).cmp(&(self.num * n as i128))
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::ops::Add for SignedRatio {
    type Output = SignedRatio;

    fn add(self, other: SignedRatio) -> SignedRatio {
        SignedRatio {
            num: self.num * other.den + other.num * self.den,
            den: self.den * other.den,
        }
        .reduced()
    }
}

impl std::ops::Sub for SignedRatio {
    type Output = SignedRatio;

    fn sub(self, other: SignedRatio) -> SignedRatio {
        self + SignedRatio {
            num: -other.num,
            den: other.den,
        }
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Formats `num / den` as a decimal with a fixed number of places,
/// rounding half up using integer arithmetic only.
pub fn decimal(num: u64, den: u64, places: u32) -> String {
    if den == 0 {
        return "nan".to_owned();
    }
    let scale = 10u128.pow(places);
    let scaled = (num as u128 * scale * 2 + den as u128) / (den as u128 * 2);
    let int = scaled / scale;
    let frac = scaled % scale;
    if places == 0 {
        int.to_string()
    } else {
        format!("{int}.{frac:0width$}", width = places as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("1/2").unwrap(), Rational::new(1, 2));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), Rational::new(3, 2));
        assert_eq!(parse_rational("3").unwrap(), Rational::from_integer(3));
    }

    #[test]
    fn rejects_decimals_and_junk() {
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("-1/2").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_unit_rational("3/2").is_err());
    }

    #[test]
    fn exact_ratio_comparison() {
        let half = Rational::new(1, 2);
        assert!(ratio_at_most(5, 10, &half));
        assert!(!ratio_at_most(6, 11, &half));
        assert_eq!(cmp_ratio(1, 3, &Rational::new(1, 3)), Ordering::Equal);
    }

    #[test]
    fn signed_threshold() {
        let beta = SignedRatio::from_rational(&Rational::new(3, 5));
        let t = beta - SignedRatio { num: 1, den: 2 };
        assert_eq!(t, SignedRatio { num: 1, den: 10 });
        let neg = SignedRatio::from_rational(&Rational::new(1, 5)) - SignedRatio { num: 1, den: 2 };
        assert!(neg.num < 0);
        assert_eq!(neg.cmp_ratio(0, 7), Ordering::Greater);
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(decimal(1, 3, 6), "0.333333");
        assert_eq!(decimal(2, 3, 6), "0.666667");
        assert_eq!(decimal(1, 1, 3), "1.000");
        assert_eq!(decimal(0, 5, 2), "0.00");
    }
}
