use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::Serialize;

use super::IntegerSet;
use crate::error::{Error, Result};
use crate::rational::{decimal, Rational};

/// One point `(n, S(n))` of a counting function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Sample {
    pub n: u64,
    pub count: u64,
}

impl Sample {
    pub fn ratio(&self) -> f64 {
        self.count as f64 / self.n as f64
    }

    pub fn ratio_exact(&self) -> Rational {
        Rational::new(self.count, self.n)
    }

    fn cmp_ratio(&self, other: &Sample) -> Ordering {
        (self.count as u128 * other.n as u128).cmp(&(other.count as u128 * self.n as u128))
    }
}

/// Sampled `S(n)/n` plus exact extremes over a tail window, used as
/// finite-horizon estimates of the lower and upper asymptotic densities.
#[derive(Clone, Debug, Serialize)]
pub struct DensityProfile {
    pub horizon: u64,
    pub stride: u64,
    pub samples: Vec<Sample>,
    pub tail_start: u64,
    /// Smallest `S(n)/n` over every `n` in `[tail_start, horizon]`.
    pub tail_min: Sample,
    /// Largest `S(n)/n` over every `n` in `[tail_start, horizon]`.
    pub tail_max: Sample,
}

impl DensityProfile {
    /// Samples at `stride, 2·stride, …` and at the horizon; extremes are
    /// exact over the whole window `[tail_start, H]`, not just the samples.
    pub fn new(s: &IntegerSet, stride: u64, tail_start: u64) -> Result<Self> {
        let horizon = s.horizon();
        if stride == 0 {
            return Err(Error::Precondition(
                "sample stride must be at least 1".into(),
            ));
        }
        if tail_start == 0 || tail_start > horizon {
            return Err(Error::Precondition(format!(
                "tail window start {tail_start} outside [1, {horizon}]"
            )));
        }
        let mut samples: Vec<Sample> = (1..=horizon / stride)
            .map(|i| {
                let n = i * stride;
                Sample {
                    n,
                    count: s.count_unchecked(n),
                }
            })
            .collect();
        if samples.last().map(|x| x.n) != Some(horizon) {
            samples.push(Sample {
                n: horizon,
                count: s.count_unchecked(horizon),
            });
        }

        // S(n)/n falls between jumps, so the maximum sits at the window start
        // or at an element, and the minimum just before an element or at H.
        let at = |n: u64| Sample {
            n,
            count: s.count_unchecked(n),
        };
        let mut tail_min = at(horizon);
        let mut tail_max = at(tail_start);
        let first = s.elements().partition_point(|&x| x <= tail_start);
        for &x in &s.elements()[first..] {
            if x > horizon {
                break;
            }
            let before = at(x - 1);
            if before.cmp_ratio(&tail_min) != Ordering::Greater {
                tail_min = before;
            }
            let here = at(x);
            if here.cmp_ratio(&tail_max) == Ordering::Greater {
                tail_max = here;
            }
        }
        Ok(DensityProfile {
            horizon,
            stride,
            samples,
            tail_start,
            tail_min,
            tail_max,
        })
    }

    pub fn last(&self) -> Sample {
        *self
            .samples
            .last()
            .expect("profile always has the horizon sample")
    }

    /// CSV with header `n,count,ratio`; ratios are rounded decimals computed
    /// in integer arithmetic so reruns are byte-identical.
    pub fn to_csv(&self, header: &[String]) -> String {
        let mut out = String::new();
        for line in header {
            let _ = writeln!(out, "# {line}");
        }
        out.push_str("n,count,ratio\n");
        for s in &self.samples {
            let _ = writeln!(out, "{},{},{}", s.n, s.count, decimal(s.count, s.n, 12));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::density_profile;

    fn brute_extremes(s: &IntegerSet, lo: u64) -> (f64, f64) {
        let mut mn = f64::INFINITY;
        let mut mx = f64::NEG_INFINITY;
        for n in lo..=s.horizon() {
            let r = s.count(n).unwrap() as f64 / n as f64;
            mn = mn.min(r);
            mx = mx.max(r);
        }
        (mn, mx)
    }

    #[test]
    fn even_numbers_sit_at_one_half() {
        let h = 1_000_000;
        let evens = IntegerSet::from_sorted((1..=h / 2).map(|i| 2 * i).collect(), h).unwrap();
        let p = density_profile(&evens, 10_000).unwrap();
        assert_eq!(p.samples.len(), 100);
        for s in &p.samples {
            assert!((0.4999..=0.5001).contains(&s.ratio()), "{s:?}");
            assert_eq!(s.count, s.n / 2);
        }
    }

    #[test]
    fn empty_and_full() {
        let h = 1000;
        let empty = IntegerSet::empty(h).unwrap();
        let full = IntegerSet::interval(1, h, h).unwrap();
        for s in density_profile(&empty, 7).unwrap().samples {
            assert_eq!(s.count, 0);
        }
        let p = density_profile(&full, 7).unwrap();
        assert!(p.samples.iter().all(|s| s.count == s.n));
        assert_eq!(p.last().n, h);
        assert_eq!(p.tail_min.ratio(), 1.0);
    }

    #[test]
    fn extremes_match_brute_force() {
        let s = IntegerSet::new(vec![0, 3, 4, 5, 40, 41, 90, 91, 92, 93, 150], 200).unwrap();
        for lo in [1, 2, 5, 41, 100, 200] {
            let p = DensityProfile::new(&s, 10, lo).unwrap();
            let (mn, mx) = brute_extremes(&s, lo);
            assert_eq!(p.tail_min.ratio(), mn, "lo={lo}");
            assert_eq!(p.tail_max.ratio(), mx, "lo={lo}");
        }
    }

    #[test]
    fn csv_layout() {
        let s = IntegerSet::new(vec![1, 2, 3], 5).unwrap();
        let csv = density_profile(&s, 2).unwrap().to_csv(&[]);
        assert_eq!(
            csv,
            "n,count,ratio\n2,2,1.000000000000\n4,3,0.750000000000\n5,3,0.600000000000\n"
        );
    }

    #[test]
    fn bad_arguments() {
        let s = IntegerSet::new(vec![1], 5).unwrap();
        assert!(DensityProfile::new(&s, 0, 1).is_err());
        assert!(DensityProfile::new(&s, 1, 6).is_err());
    }
}
