use std::cmp::Ordering;

use sparse_complements::complement::build_complement;
use sparse_complements::oscillation::{
    build_oscillating, gamma, verify_well_defined, Diagnostic, OscillationState, Parity,
};
use sparse_complements::rational::SignedRatio;
use sparse_complements::sparseness::finite_rates;
use sparse_complements::{ErrorKind, IntegerSet, Rational, SetGenerator};

const H: u64 = 100_000;

fn rat(p: u64, q: u64) -> Rational {
    Rational::new(p, q)
}

fn setup(beta: Rational, b: &[u64]) -> (IntegerSet, IntegerSet) {
    let g = SetGenerator::Finite(b.to_vec());
    let c = build_complement(
        &beta,
        &g,
        &finite_rates(*b.iter().max().unwrap()),
        H,
        H / 100,
    )
    .unwrap()
    .set;
    (g.materialize(H).unwrap(), c)
}

/// `counts[n] = |(A + B) ∩ [1, n]|` by direct enumeration.
fn sum_counts(a: &IntegerSet, b: &IntegerSet) -> Vec<u64> {
    let mut hit = vec![false; H as usize + 1];
    for x in a.iter() {
        for y in b.iter() {
            if x + y <= H {
                hit[(x + y) as usize] = true;
            }
        }
    }
    let mut out = vec![0; hit.len()];
    for n in 1..hit.len() {
        out[n] = out[n - 1] + hit[n] as u64;
    }
    out
}

fn floor(alpha: &Rational, beta: &Rational, k: u64) -> SignedRatio {
    SignedRatio::from_rational(alpha) + gamma(alpha, beta, k)
}

#[test]
fn construction_invariants() {
    let (alpha, beta) = (rat(1, 4), rat(1, 2));
    let (b, c) = setup(beta, &[1, 10]);
    let out = build_oscillating(&alpha, &beta, &b, &c, H).unwrap();
    let report = &out.report;
    assert!(report.checkpoints.len() >= 4, "{report:?}");
    let ab = sum_counts(&out.set, &b);
    let cb = sum_counts(&c, &b);

    // threshold: last failure of alpha + gamma_1 for C + B, plus one
    let n0 = report.threshold;
    let f1 = floor(&alpha, &beta, 1);
    assert!((n0..=H).all(|n| f1.cmp_ratio(cb[n as usize], n) != Ordering::Less));
    assert!(n0 == 1 || f1.cmp_ratio(cb[n0 as usize - 1], n0 - 1) == Ordering::Less);

    // checkpoints increase; A is C minus the odd-step blocks
    let mut dropped = vec![false; H as usize + 1];
    let mut prev = 1;
    for cp in &report.checkpoints {
        assert!(cp.n > prev);
        assert_eq!(cp.parity, Parity::of(cp.k));
        if cp.parity == Parity::Odd {
            for x in prev + 1..cp.n {
                dropped[x as usize] = true;
            }
        }
        prev = cp.n;
    }
    let expected: Vec<u64> = c.iter().filter(|&x| !dropped[x as usize]).collect();
    assert_eq!(out.set.elements(), expected.as_slice());
    assert!(out.set.is_subset(&c));

    for cp in &report.checkpoints {
        match cp.parity {
            Parity::Even => {
                let ceiling = SignedRatio::from_rational(&beta)
                    - SignedRatio {
                        num: 1,
                        den: cp.k as i128,
                    };
                assert_eq!(ab[cp.n as usize], cp.count);
                assert_eq!(
                    ceiling.cmp_ratio(cp.count, cp.n),
                    Ordering::Greater,
                    "k = {}",
                    cp.k
                );
            }
            Parity::Odd => {
                let dip = cp.dip.expect("odd steps record a dip");
                assert!(dip.n >= n0);
                let allowed = floor(&alpha, &beta, cp.k + 1);
                assert_eq!(allowed.cmp_ratio(dip.count, dip.n), Ordering::Less);
            }
        }
    }

    // the guarantee carried by the last set reached
    let last = floor(&alpha, &beta, report.completed() + 1);
    for n in n0..=H {
        assert_ne!(last.cmp_ratio(ab[n as usize], n), Ordering::Less, "n = {n}");
    }
}

#[test]
fn first_step_is_well_defined() {
    let (alpha, beta) = (rat(1, 5), rat(3, 5));
    let (b, c) = setup(beta, &[1]);
    let out = build_oscillating(&alpha, &beta, &b, &c, H).unwrap();
    let state = OscillationState {
        k: 1,
        c: c.clone(),
        n_k: 1,
        threshold: out.report.threshold,
        alpha,
        beta,
    };
    let first = out.report.checkpoints[0];
    // D_u agrees with C ∩ [1, n_1] on [1, u], so a dip of the latter at u bounds n_2
    let Diagnostic::Dip { u } = verify_well_defined(&state, &b).unwrap() else {
        panic!("first step should be possible");
    };
    assert!(
        first.n <= u,
        "n_2 = {}, dip of the bare prefix at {u}",
        first.n
    );
}

#[test]
fn equal_densities_keep_c() {
    let beta = rat(3, 5);
    let (b, c) = setup(beta, &[1]);
    let out = build_oscillating(&beta, &beta, &b, &c, H).unwrap();
    assert_eq!(out.set, c);
    assert!(out.report.checkpoints.is_empty());
}

#[test]
fn dense_b_is_infeasible() {
    let (alpha, beta) = (rat(1, 5), rat(3, 5));
    let b = IntegerSet::interval(1, 1000, 1000).unwrap();
    let c = IntegerSet::interval(1, 1000, 1000).unwrap();
    let err = build_oscillating(&alpha, &beta, &b, &c, 1000).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Infeasible);
}
