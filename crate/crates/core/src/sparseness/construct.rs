use super::rates::SparsenessRates;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::sets::IntegerSet;

/// Outcome of looking for the least `a` with `f(a) >= target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reach {
    At(u64),
    /// `f` stays below the target up to `a = below`, then evaluation overflows.
    Overflow {
        below: u64,
    },
    /// `f(2^62) = f(2^63) < target`: `f` is bounded on the evaluable range.
    Bounded,
}

/// Least `a >= 1` with `f(a) >= target`, by doubling then bisection.
/// Assumes `f` non-decreasing.
pub fn least_a_reaching(rates: &SparsenessRates, target: u64) -> Reach {
    let reaches = |a: u64| rates.f_at(a).map(|v| v >= target);
    let mut below = 0u64;
    let mut hi = 1u64;
    loop {
        match reaches(hi) {
            Ok(true) => break,
            Ok(false) => {
                below = hi;
                if hi == 1 << 63 {
                    // still growing at the top of the range: the answer exists
                    // but is not representable
                    return match rates.f_at(1 << 62) {
                        Ok(v) if v == rates.f_at(hi).unwrap_or(v) => Reach::Bounded,
                        _ => Reach::Overflow { below },
                    };
                }
                hi <<= 1;
            }
            Err(_) => return Reach::Overflow { below },
        }
    }
    let mut lo = below + 1;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match reaches(mid) {
            Ok(true) => hi = mid,
            Ok(false) => lo = mid + 1,
            Err(_) => hi = mid,
        }
    }
    Reach::At(hi)
}

/// The recursive highly sparse set with rates `(f, g)`, up to `horizon`.
///
/// With `n_1 < n_2 < …` the images of `f` and `a_i` the largest `a` with
/// `f(a) = n_i`: `b_k = k` for `k <= n_1 + 1`, then
/// `b_{k+1} = b_k + a_j + ⌈g(a_j)⌉` where `n_j < b_k <= n_{j+1}`.
///
/// For `b > n_1` the band index is implicit: `a_j` is one less than the
/// least `a` with `f(a) >= b`, since no image of `f` lies strictly between
/// `n_j` and `n_{j+1}`.
pub fn construct_from_psr(rates: &SparsenessRates, horizon: u64) -> Result<IntegerSet> {
    if horizon == 0 {
        return Err(Error::Precondition("horizon must be at least 1".into()));
    }
    rates.check_invariants(1 << 16, &Rational::new(1, 2))?;
    let n1 = rates.f_at(1)?;
    let mut out: Vec<u64> = (1..=n1.saturating_add(1).min(horizon)).collect();
    let mut b = n1 + 1;
    if b > horizon {
        return IntegerSet::from_sorted(out, horizon);
    }
    loop {
        let a_j = match least_a_reaching(rates, b) {
            Reach::At(a) => a - 1,
            Reach::Overflow { below } => {
                if b.checked_add(below).is_none_or(|x| x > horizon) {
                    break;
                }
                return Err(Error::Overflow(format!(
                    "evaluating f past a = {below} while extending from {b}"
                )));
            }
            Reach::Bounded => {
                return Err(Error::Generation(format!(
                    "f never reaches {b}: its images are exhausted, so a_i is undefined"
                )))
            }
        };
        let step = a_j
            .checked_add(rational::ceil(&rates.g_at(a_j)?))
            .and_then(|s| b.checked_add(s));
        match step {
            Some(next) if next <= horizon => {
                out.push(next);
                b = next;
            }
            _ => break,
        }
    }
    IntegerSet::from_sorted(out, horizon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparseness::{psr_check, Expr, Verdict};

    fn rates(f: &str, g: &str) -> SparsenessRates {
        SparsenessRates::new(Expr::parse(f).unwrap(), Expr::parse(g).unwrap())
    }

    /// Direct transcription of the recursion: list the images n_i and the
    /// largest a_i with f(a_i) = n_i by scanning a upward, then walk the bands.
    fn reference(r: &SparsenessRates, horizon: u64) -> Vec<u64> {
        let mut images: Vec<(u64, u64)> = Vec::new(); // (n_i, a_i)
        let mut a = 0u64;
        // scan until some image reaches `target`, or a passes `limit`
        let mut scan = |images: &mut Vec<(u64, u64)>, target: u64, limit: u64| {
            while images.last().is_none_or(|&(n, _)| n < target) && a < limit {
                a += 1;
                let v = r.f_at(a).unwrap();
                match images.last_mut() {
                    Some((n, last_a)) if *n == v => *last_a = a,
                    _ => images.push((v, a)),
                }
            }
            a
        };
        scan(&mut images, 1, u64::MAX);
        let n1 = images[0].0;
        let mut b: Vec<u64> = (1..=n1 + 1).filter(|&k| k <= horizon).collect();
        loop {
            let bk = *b.last().unwrap();
            let reached = scan(&mut images, bk, horizon);
            if images.last().unwrap().0 < bk {
                // still in the band below b_k, so a_j >= reached and the step overshoots
                assert!(bk + reached > horizon);
                break;
            }
            let j = images.iter().rposition(|&(n, _)| n < bk).unwrap();
            let a_j = images[j].1;
            let next = bk + a_j + rational::ceil(&r.g_at(a_j).unwrap());
            if next > horizon {
                break;
            }
            b.push(next);
        }
        b
    }

    #[test]
    fn sqrt_rate_hand_run() {
        let r = rates("sqrt(a)", "0");
        let b = construct_from_psr(&r, 10_000).unwrap();
        // n_1 = 1, a_1 = 3: b = 1, 2, then 2 + 3 = 5; b = 5 lies in (4, 5],
        // a_4 = 24 → 29; 29 in (28, 29], a_28 = 840 → 869
        assert_eq!(b.elements(), &[1, 2, 5, 29, 869]);
        assert_eq!(b.elements(), &reference(&r, 10_000)[..]);
    }

    #[test]
    fn matches_reference_recursion() {
        for (f, g) in [
            ("sqrt(a)", "a"),
            ("10*sqrt(a)", "0"),
            ("sqrt(a) + 3", "1/2"),
            ("sqrt(a)*1/2 + 1", "a*1/3"),
            ("2*sqrt(sqrt(a))", "a + 1"),
        ] {
            let r = rates(f, g);
            let got = construct_from_psr(&r, 200_000).unwrap();
            assert_eq!(
                got.elements(),
                &reference(&r, 200_000)[..],
                "f = {f}, g = {g}"
            );
            let hi = crate::sparseness::max_checkable_a(&r, 200_000, 200_000).unwrap();
            assert_eq!(
                psr_check(&got, &r, 1, hi).unwrap().verdict,
                Verdict::SparseConsistent
            );
        }
    }

    #[test]
    fn bounded_f_fails() {
        let err = construct_from_psr(&rates("3", "0"), 1000).unwrap_err();
        assert!(matches!(err, Error::Generation(_)), "{err}");
    }

    #[test]
    fn overflow_is_a_clean_stop() {
        let b = construct_from_psr(&rates("log2(a)", "0"), 1 << 62).unwrap();
        assert_eq!(b.len(), 5);
        // 1, 2, 5 (a_1 = 3), then a = 31 → 36, then a = 2^36 - 1
        assert_eq!(&b.elements()[..5], &[1, 2, 5, 36, 36 + (1 << 36) - 1]);
    }

    #[test]
    fn linear_f_is_rejected() {
        assert!(construct_from_psr(&rates("a", "0"), 1000).is_err());
    }
}
