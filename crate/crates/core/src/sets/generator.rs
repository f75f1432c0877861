use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{read_set, IntegerSet};
use crate::error::{Error, Result};
use crate::sparseness::{construct_from_psr, SparsenessRates};

/// A lazily described subset of the positive integers.
///
/// Spec strings: `finite:a,b,c`, `factorials`, `powers:k`, `geometric:r`,
/// `psr:<rates-file>` (or inline `psr:f=<expr>;g=<expr>`), `file:<path>`.
#[derive(Clone, Debug)]
pub enum SetGenerator {
    Finite(Vec<u64>),
    /// `{n! : n >= 1}`
    Factorials,
    /// `{n^k : n >= 1}`
    Powers(u32),
    /// `{r^j : j >= 0}`
    Geometric(u64),
    /// Highly sparse set built recursively from a pair of sparseness rates.
    Psr {
        rates: SparsenessRates,
        source: Option<PathBuf>,
    },
    /// A set file; the file is taken to list the whole set.
    File(PathBuf),
}

impl SetGenerator {
    /// Every element `<= horizon`, sorted and deduplicated.
    ///
    /// Overflow while generating stops the stream at the last representable
    /// element, which is necessarily past any `u64` horizon.
    pub fn materialize(&self, horizon: u64) -> Result<IntegerSet> {
        if horizon == 0 {
            return Err(Error::Precondition("horizon must be at least 1".into()));
        }
        match self {
            SetGenerator::Finite(xs) => {
                if xs.contains(&0) {
                    return Err(Error::Input(
                        "finite generator elements must be positive".into(),
                    ));
                }
                IntegerSet::clamped(xs.clone(), horizon)
            }
            SetGenerator::Factorials => {
                let mut out = Vec::new();
                let mut fact: u64 = 1;
                for n in 2u64.. {
                    if fact > horizon {
                        break;
                    }
                    out.push(fact);
                    match fact.checked_mul(n) {
                        Some(next) => fact = next,
                        None => break,
                    }
                }
                IntegerSet::from_sorted(out, horizon)
            }
            SetGenerator::Powers(k) => {
                if *k == 0 {
                    return Err(Error::Input("powers:k needs k >= 1".into()));
                }
                let out = (1u64..)
                    .map(|n| n.checked_pow(*k))
                    .take_while(|p| matches!(p, Some(v) if *v <= horizon))
                    .map(Option::unwrap)
                    .collect();
                IntegerSet::from_sorted(out, horizon)
            }
            SetGenerator::Geometric(r) => {
                if *r < 2 {
                    return Err(Error::Input("geometric:r needs r >= 2".into()));
                }
                let mut out = Vec::new();
                let mut x: u64 = 1;
                while x <= horizon {
                    out.push(x);
                    match x.checked_mul(*r) {
                        Some(next) => x = next,
                        None => break,
                    }
                }
                IntegerSet::from_sorted(out, horizon)
            }
            SetGenerator::Psr { rates, .. } => construct_from_psr(rates, horizon),
            SetGenerator::File(path) => {
                let set = read_set(path, None)?;
                if set.min() == Some(0) {
                    return Err(Error::Input(format!(
                        "{}: generator sets must not contain 0",
                        path.display()
                    )));
                }
                IntegerSet::clamped(set.into_elements(), horizon)
            }
        }
    }

    pub fn parse(spec: &str) -> Result<Self> {
        spec.parse()
    }
}

impl FromStr for SetGenerator {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (kind, arg) = match spec.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a.trim())),
            None => (spec, None),
        };
        let need = |what: &str| {
            arg.filter(|a| !a.is_empty())
                .ok_or_else(|| Error::Input(format!("generator `{kind}` needs {what}")))
        };
        let int = |s: &str| -> Result<u64> {
            s.trim()
                .parse()
                .map_err(|_| Error::Input(format!("not a non-negative integer: {s:?}")))
        };
        match kind {
            "finite" => {
                let list = arg.unwrap_or("");
                let xs = list
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(int)
                    .collect::<Result<Vec<_>>>()?;
                Ok(SetGenerator::Finite(xs))
            }
            "factorials" => Ok(SetGenerator::Factorials),
            "powers" => {
                let k = int(need("an exponent")?)?;
                let k = u32::try_from(k).map_err(|_| Error::Input(format!("exponent {k} too large")))?;
                Ok(SetGenerator::Powers(k))
            }
            "geometric" => Ok(SetGenerator::Geometric(int(need("a ratio")?)?)),
            "psr" => {
                let arg = need("a rates file or inline rates")?;
                if arg.contains('=') {
                    let rates = SparsenessRates::parse_inline(arg)?;
                    Ok(SetGenerator::Psr {
                        rates,
                        source: None,
                    })
                } else {
                    let path = Path::new(arg);
                    Ok(SetGenerator::Psr {
                        rates: SparsenessRates::read(path)?,
                        source: Some(path.to_path_buf()),
                    })
                }
            }
            "file" => Ok(SetGenerator::File(PathBuf::from(need("a path")?))),
            other => Err(Error::Input(format!(
                "unknown generator {other:?} (expected finite, factorials, powers, geometric, psr, file)"
            ))),
        }
    }
}

impl fmt::Display for SetGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetGenerator::Finite(xs) => {
                let list: Vec<String> = xs.iter().map(u64::to_string).collect();
                write!(f, "finite:{}", list.join(","))
            }
            SetGenerator::Factorials => f.write_str("factorials"),
            SetGenerator::Powers(k) => write!(f, "powers:{k}"),
            SetGenerator::Geometric(r) => write!(f, "geometric:{r}"),
            SetGenerator::Psr {
                source: Some(p), ..
            } => write!(f, "psr:{}", p.display()),
            SetGenerator::Psr {
                rates,
                source: None,
            } => write!(f, "psr:{}", rates.to_inline()),
            SetGenerator::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(spec: &str, h: u64) -> Vec<u64> {
        SetGenerator::parse(spec)
            .unwrap()
            .materialize(h)
            .unwrap()
            .into_elements()
    }

    #[test]
    fn materialize_examples() {
        assert_eq!(mat("factorials", 100), vec![1, 2, 6, 24]);
        assert_eq!(mat("powers:2", 10), vec![1, 4, 9]);
        assert_eq!(mat("finite:3,1,2", 10), vec![1, 2, 3]);
        assert_eq!(mat("geometric:10", 5000), vec![1, 10, 100, 1000]);
        assert_eq!(mat("finite:1,50", 10), vec![1]);
    }

    #[test]
    fn overflow_stops_cleanly() {
        let all = mat("factorials", u64::MAX);
        assert_eq!(all.len(), 20);
        assert_eq!(*all.last().unwrap(), 2_432_902_008_176_640_000);
        assert_eq!(mat("powers:3", u64::MAX).len(), 2_642_245);
        assert_eq!(mat("geometric:2", u64::MAX).len(), 64);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(SetGenerator::parse("powers").is_err());
        assert!(SetGenerator::parse("primes").is_err());
        assert!(SetGenerator::parse("finite:1,x").is_err());
        assert!(SetGenerator::parse("finite:0,1")
            .unwrap()
            .materialize(5)
            .is_err());
        assert!(SetGenerator::parse("geometric:1")
            .unwrap()
            .materialize(5)
            .is_err());
    }

    #[test]
    fn display_round_trips() {
        for spec in ["finite:1,10", "factorials", "powers:3", "geometric:7"] {
            assert_eq!(SetGenerator::parse(spec).unwrap().to_string(), spec);
        }
    }

    #[test]
    fn materialization_is_reproducible() {
        let g = SetGenerator::parse("psr:f=sqrt(a);g=a").unwrap();
        assert_eq!(
            g.materialize(1_000_000).unwrap(),
            g.materialize(1_000_000).unwrap()
        );
    }
}
