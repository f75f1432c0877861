use std::fs;
use std::path::{Path, PathBuf};

use sparse_complements::complement::build_complement;
use sparse_complements::oscillation::build_oscillating;
use sparse_complements::rational::{decimal, format_rational, parse_rational, parse_unit_rational};
use sparse_complements::sets::{read_set, write_set, write_set_string, DensityProfile, Sample};
use sparse_complements::sparseness::{
    builtin_rates, consecutive_ratios, construct_from_psr, max_checkable_a, psr_check,
    psr_from_ratios, ratio_test, Expr, SparsenessRates, SparsenessVerdict, Verdict, Witness,
};
use sparse_complements::{sumset, Error, IntegerSet, Rational, Result, SetGenerator};

use crate::config::RunConfig;
use crate::{AnalyzeArgs, ConstructArgs, MakeArgs, OscillateArgs, Outcome, RateSource, VerifyArgs};

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Input(format!("serializing {}: {e}", path.display())))?;
    text.push('\n');
    write_text(path, &text)
}

fn to_json<T: serde::Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("report types serialize")
}

fn show(path: &Option<PathBuf>) -> Option<String> {
    path.as_ref().map(|p| p.display().to_string())
}

fn ratio(s: &Sample) -> String {
    decimal(s.count, s.n, 6)
}

fn check_horizon(horizon: u64) -> Result<()> {
    if horizon == 0 {
        return Err(Error::Input("horizon must be at least 1".into()));
    }
    Ok(())
}

fn default_stride(stride: Option<u64>, horizon: u64) -> u64 {
    stride.unwrap_or((horizon / 100).max(1))
}

fn rates_from_exprs(f: &str, g: &str) -> Result<SparsenessRates> {
    Ok(SparsenessRates::new(
        Expr::parse_with_base(f, None)?,
        Expr::parse_with_base(g, None)?,
    ))
}

/// Rates for `B`: an explicit file, rates derived from the gaps of `B`, or
/// the generator's own.
fn resolve_rates(b: &SetGenerator, source: &RateSource, horizon: u64) -> Result<SparsenessRates> {
    if let Some(path) = &source.rates {
        return SparsenessRates::read(path);
    }
    if source.derive_rates {
        return psr_from_ratios(&b.materialize(horizon)?);
    }
    builtin_rates(b)?.ok_or_else(|| {
        Error::Input(format!(
            "B = {b} carries no sparseness rates; pass --rates FILE or --derive-rates"
        ))
    })
}

fn rate_config(config: RunConfig, source: &RateSource) -> RunConfig {
    config
        .opt("rates", show(&source.rates).as_ref())
        .flag("derive-rates", source.derive_rates)
}

fn print_profile(label: &str, p: &DensityProfile) {
    let last = p.last();
    println!("{label}({}) / {} = {}", last.n, last.n, ratio(&last));
    println!(
        "tail [{}, {}]: min {} at n = {}, max {} at n = {}",
        p.tail_start,
        p.horizon,
        ratio(&p.tail_min),
        p.tail_min.n,
        ratio(&p.tail_max),
        p.tail_max.n
    );
}

pub fn construct(args: ConstructArgs) -> Result<Outcome> {
    check_horizon(args.horizon)?;
    let alpha = parse_unit_rational(&args.alpha)?;
    let b = SetGenerator::parse(&args.b)?;
    let stride = default_stride(args.stride, args.horizon);
    let config = rate_config(
        RunConfig::new("construct")
            .arg("alpha", format_rational(&alpha))
            .arg("b", &b)
            .arg("horizon", args.horizon),
        &args.rates,
    )
    .arg("stride", stride);
    let rates = resolve_rates(&b, &args.rates, args.horizon)?;
    let out = build_complement(&alpha, &b, &rates, args.horizon, stride)?;
    let header = config.header();

    println!(
        "B = {b}, alpha = {}, horizon = {}",
        format_rational(&alpha),
        args.horizon
    );
    match &out.trace.params {
        Some(p) => println!(
            "threshold N = {}, greedy tracked sums to {}, f = {}, g = {}",
            p.threshold,
            p.horizon,
            brief(&p.rates.f),
            brief(&p.rates.g)
        ),
        None => println!("alpha is 0 or 1: no greedy run needed"),
    }
    println!(
        "|A| = {}, first element {}",
        out.set.len(),
        out.set.min().map_or("none".into(), |x| x.to_string())
    );
    print_profile("(A+B)", &out.profile);

    if let Some(path) = &args.out {
        write_set(path, &out.set, &header)?;
    }
    if let Some(path) = &args.profile {
        write_text(path, &out.profile.to_csv(&header))?;
    }
    if let Some(path) = &args.trace {
        let doc = serde_json::json!({ "config": config.to_json(), "trace": to_json(&out.trace) });
        write_json(path, &doc)?;
    }
    Ok(Outcome::Done)
}

pub fn oscillate(args: OscillateArgs) -> Result<Outcome> {
    check_horizon(args.horizon)?;
    let h = args.horizon;
    let alpha = parse_unit_rational(&args.alpha)?;
    let beta = parse_unit_rational(&args.beta)?;
    let b = SetGenerator::parse(&args.b)?;
    let stride = default_stride(args.stride, h);
    let config = rate_config(
        RunConfig::new("oscillate")
            .arg("alpha", format_rational(&alpha))
            .arg("beta", format_rational(&beta))
            .arg("b", &b)
            .opt("c", show(&args.c).as_ref())
            .arg("horizon", h),
        &args.rates,
    )
    .arg("stride", stride);
    let b_set = b.materialize(h)?;
    let c = match &args.c {
        Some(path) => {
            let c = read_set(path, None)?;
            if c.horizon() > h {
                c.truncate(h)?
            } else {
                c
            }
        }
        None => {
            let rates = resolve_rates(&b, &args.rates, h)?;
            build_complement(&beta, &b, &rates, h, stride)?.set
        }
    };
    let out = build_oscillating(&alpha, &beta, &b_set, &c, h)?;
    let profile = DensityProfile::new(&out.sumset, stride, h.div_ceil(2))?;
    let header = config.header();

    println!(
        "B = {b}, alpha = {}, beta = {}, horizon = {h}",
        format_rational(&alpha),
        format_rational(&beta)
    );
    println!("threshold N = {}", out.report.threshold);
    for cp in &out.report.checkpoints {
        let dip = cp
            .dip
            .map(|d| {
                format!(
                    ", dip at n = {} with ratio {}",
                    d.n,
                    decimal(d.count, d.n, 6)
                )
            })
            .unwrap_or_default();
        println!(
            "k = {:>3} ({}): n_(k+1) = {}, ratio {}{dip}",
            cp.k,
            cp.parity.as_str(),
            cp.n,
            decimal(cp.count, cp.n, 6)
        );
    }
    match &out.report.stall {
        Some(reason) => println!("stopped after step {}: {reason}", out.report.completed()),
        None => println!("completed {} steps", out.report.completed()),
    }
    print_profile("(A+B)", &profile);

    if let Some(path) = &args.out {
        write_set(path, &out.set, &header)?;
    }
    if let Some(path) = &args.checkpoints {
        write_text(path, &out.report.to_csv(&header))?;
    }
    if let Some(path) = &args.profile {
        write_text(path, &profile.to_csv(&header))?;
    }
    if let Some(path) = &args.report {
        let doc = serde_json::json!({ "config": config.to_json(), "report": to_json(&out.report) });
        write_json(path, &doc)?;
    }
    Ok(Outcome::Done)
}

/// Largest `a` the gap check visits when no range is given.
const DEFAULT_A_CAP: u64 = 1_000_000;

/// Expressions with long tables are summarized.
fn brief(e: &Expr) -> String {
    let text = e.to_string();
    if text.len() <= 100 {
        text
    } else {
        format!(
            "{}...",
            &text[..text.char_indices().nth(96).map_or(text.len(), |(i, _)| i)]
        )
    }
}

fn parse_a_range(text: &str) -> Result<(u64, u64)> {
    let bad = || {
        Error::Input(format!(
            "a-range must be lo:hi with 1 <= lo <= hi, got {text:?}"
        ))
    };
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn describe_witness(w: &Witness) -> String {
    match w {
        Witness::PsrViolation { a, b_t, b_s } => format!(
            "a = {a}: consecutive elements {b_t} < {b_s} above f(a) differ by {} < a + g(a)",
            b_s - b_t
        ),
        Witness::RatioTail {
            index,
            b_j,
            b_next,
            bound,
        } => format!(
            "tail ratio b_{}/b_{index} = {b_next}/{b_j} = {} is the largest in the tail and <= M = {}",
            index + 1,
            decimal(*b_next, *b_j, 6),
            format_rational(bound)
        ),
    }
}

fn print_verdict(label: &str, v: &SparsenessVerdict) {
    let name = match v.verdict {
        Verdict::SparseConsistent => "sparse-consistent",
        Verdict::NotSparse => "not-sparse",
        Verdict::Inconclusive => "inconclusive",
    };
    println!("{label}: {name}");
    if let Some(w) = &v.witness {
        println!("  witness: {}", describe_witness(w));
    }
}

pub fn verify_sparse(args: VerifyArgs) -> Result<Outcome> {
    check_horizon(args.horizon)?;
    let h = args.horizon;
    let b = SetGenerator::parse(&args.b)?;
    let targets = args
        .m_targets
        .iter()
        .map(|t| parse_rational(t))
        .collect::<Result<Vec<Rational>>>()?;
    let mut config = RunConfig::new("verify-sparse")
        .arg("b", &b)
        .arg("horizon", h)
        .arg(
            "m-targets",
            targets
                .iter()
                .map(format_rational)
                .collect::<Vec<_>>()
                .join(","),
        )
        .opt("rates", show(&args.rates).as_ref())
        .opt("f", args.f.as_ref())
        .opt("g", args.g.as_ref())
        .opt("a-range", args.a_range.as_ref());
    let set = b.materialize(h)?;
    println!("B = {b}: {} elements up to {h}", set.len());

    let ratio_verdict = if set.len() >= 2 {
        let ratios = consecutive_ratios(&set);
        let shown: Vec<usize> = if ratios.len() <= 24 {
            (0..ratios.len()).collect()
        } else {
            (0..10).chain(ratios.len() - 10..ratios.len()).collect()
        };
        for (pos, &i) in shown.iter().enumerate() {
            if pos > 0 && shown[pos - 1] + 1 != i {
                println!("  ...");
            }
            let (lo, hi) = ratios[i];
            let exact = if hi % lo == 0 {
                (hi / lo).to_string()
            } else {
                decimal(hi, lo, 6)
            };
            println!("  b_{}/b_{} = {hi}/{lo} = {exact}", i + 2, i + 1);
        }
        let v = ratio_test(&set, &targets)?;
        for t in &v.targets {
            match t.exceeded_from {
                Some(j) => println!(
                    "  M = {}: every ratio from index {j} on exceeds it",
                    format_rational(&t.target)
                ),
                None => println!(
                    "  M = {}: not exceeded in the tail",
                    format_rational(&t.target)
                ),
            }
        }
        print_verdict("ratio test", &v);
        Some(v)
    } else {
        println!(
            "ratio test: skipped, B has fewer than 2 elements (finite sets are highly sparse)"
        );
        None
    };

    let rates = match (&args.rates, &args.f, &args.g) {
        (Some(path), _, _) => Some(SparsenessRates::read(path)?),
        (None, Some(f), Some(g)) => Some(rates_from_exprs(f, g)?),
        _ => builtin_rates(&b)?,
    };
    let gap_verdict = match rates {
        None => None,
        Some(rates) => {
            let range = match &args.a_range {
                Some(text) => Some(parse_a_range(text)?),
                None => max_checkable_a(&rates, h, h.min(DEFAULT_A_CAP)).map(|hi| (1, hi)),
            };
            match range {
                Some((lo, hi)) => {
                    println!(
                        "gap check with f = {}, g = {} for a in [{lo}, {hi}]",
                        brief(&rates.f),
                        brief(&rates.g)
                    );
                    let v = psr_check(&set, &rates, lo, hi)?;
                    print_verdict("gap check", &v);
                    Some(v)
                }
                None => {
                    println!("gap check: skipped, no a has its window inside the horizon");
                    None
                }
            }
        }
    };

    let verdicts = [&ratio_verdict, &gap_verdict];
    let overall = if verdicts
        .iter()
        .any(|v| matches!(v, Some(v) if v.verdict == Verdict::NotSparse))
    {
        Verdict::NotSparse
    } else if verdicts
        .iter()
        .any(|v| matches!(v, Some(v) if v.verdict == Verdict::Inconclusive))
    {
        Verdict::Inconclusive
    } else {
        Verdict::SparseConsistent
    };
    let overall_name = to_json(&overall);
    println!("verdict: {}", overall_name.as_str().unwrap_or_default());
    if let Some(path) = &args.json {
        config = config.arg("json", path.display());
        let doc = serde_json::json!({
            "config": config.to_json(),
            "verdict": overall_name,
            "ratio_test": ratio_verdict.as_ref().map(to_json),
            "gap_check": gap_verdict.as_ref().map(to_json),
        });
        write_json(path, &doc)?;
    }
    Ok(if overall == Verdict::NotSparse {
        Outcome::NegativeVerdict
    } else {
        Outcome::Done
    })
}

pub fn make_sparse(args: MakeArgs) -> Result<Outcome> {
    check_horizon(args.horizon)?;
    let rates = match (&args.rates, &args.f, &args.g) {
        (Some(path), _, _) => SparsenessRates::read(path)?,
        (None, Some(f), Some(g)) => rates_from_exprs(f, g)?,
        _ => return Err(Error::Input("pass --rates FILE or both --f and --g".into())),
    };
    let config = RunConfig::new("make-sparse")
        .arg("f", &rates.f)
        .arg("g", &rates.g)
        .opt("rates", show(&args.rates).as_ref())
        .arg("horizon", args.horizon);
    let set = construct_from_psr(&rates, args.horizon)?;
    match &args.out {
        Some(path) => {
            write_set(path, &set, &config.header())?;
            println!(
                "{} elements up to {} written to {}",
                set.len(),
                args.horizon,
                path.display()
            );
        }
        None => print!("{}", write_set_string(&set, &config.header())),
    }
    Ok(Outcome::Done)
}

pub fn analyze(args: AnalyzeArgs) -> Result<Outcome> {
    check_horizon(args.horizon)?;
    let h = args.horizon;
    let b = SetGenerator::parse(&args.b)?;
    let stride = default_stride(args.stride, h);
    let tail_from = args.tail_from.unwrap_or(h.div_ceil(2).max(1));
    let config = RunConfig::new("analyze")
        .arg("set", args.set.display())
        .flag("finite", args.finite)
        .arg("b", &b)
        .arg("horizon", h)
        .arg("stride", stride)
        .arg("tail-from", tail_from);
    let a = if args.finite {
        IntegerSet::clamped(read_set(&args.set, None)?.into_elements(), h)?
    } else {
        let a = read_set(&args.set, None)?;
        if a.horizon() < h {
            return Err(Error::Input(format!(
                "{} is known only up to {}; pass --finite if it lists the whole set",
                args.set.display(),
                a.horizon()
            )));
        }
        a.truncate(h)?
    };
    let sums = sumset(&a, &b.materialize(h)?, h)?;
    let profile = DensityProfile::new(&sums, stride, tail_from)?;
    let csv = profile.to_csv(&config.header());
    match &args.profile {
        Some(path) => {
            write_text(path, &csv)?;
            print_profile("(A+B)", &profile);
        }
        None => print!("{csv}"),
    }
    Ok(Outcome::Done)
}
