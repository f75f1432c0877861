use sparse_complements::sparseness::{
    construct_from_psr, factorial_rates, finite_rates, max_checkable_a, psr_check, psr_from_ratios,
    ratio_test, replace_prefix, shift_down, shift_up, strengthen_psr, SparsenessRates, Verdict,
    Witness,
};
use sparse_complements::{ErrorKind, IntegerSet, Rational, SetGenerator};

fn rates(f: &str, g: &str) -> SparsenessRates {
    SparsenessRates::parse_inline(&format!("f={f};g={g}")).unwrap()
}

fn targets(ms: &[u64]) -> Vec<Rational> {
    ms.iter().map(|&m| Rational::from_integer(m)).collect()
}

/// Direct scan of the gap condition at `a`: the first pair of elements above
/// `f(a)` closer than `a + g(a)`.
fn scan_gap(b: &IntegerSet, r: &SparsenessRates, a: u64) -> Option<(u64, u64)> {
    let fa = r.f_at(a).unwrap();
    let gap = r.g_at(a).unwrap() + Rational::from_integer(a);
    let above: Vec<u64> = b.iter().filter(|&x| x > fa).collect();
    for (i, &lo) in above.iter().enumerate() {
        for &hi in &above[i + 1..] {
            if Rational::from_integer(hi - lo) < gap {
                return Some((lo, hi));
            }
        }
    }
    None
}

#[test]
fn ratio_form_examples() {
    let fact = SetGenerator::Factorials
        .materialize(1_000_000_000_000_000)
        .unwrap();
    let v = ratio_test(&fact, &targets(&[2, 10, 100])).unwrap();
    assert_eq!(v.verdict, Verdict::SparseConsistent);

    let squares = SetGenerator::Powers(2).materialize(1_000_000).unwrap();
    let v = ratio_test(&squares, &targets(&[2])).unwrap();
    assert_eq!(v.verdict, Verdict::NotSparse);
    assert!(matches!(v.witness, Some(Witness::RatioTail { .. })));

    let pair = IntegerSet::new(vec![1, 2], 10).unwrap();
    assert_eq!(
        ratio_test(&pair, &targets(&[1])).unwrap().verdict,
        Verdict::SparseConsistent
    );

    let single = IntegerSet::new(vec![5], 10).unwrap();
    assert_eq!(
        ratio_test(&single, &targets(&[2])).unwrap_err().kind(),
        ErrorKind::Input
    );
}

#[test]
fn gap_check_examples() {
    let finite = IntegerSet::new(vec![3, 40, 41, 900], 2000).unwrap();
    let v = psr_check(&finite, &finite_rates(900), 1, 500).unwrap();
    assert_eq!(v.verdict, Verdict::SparseConsistent);

    let fact = SetGenerator::Factorials
        .materialize(1_000_000_000_000)
        .unwrap();
    let v = psr_check(&fact, &rates("a", "0"), 1, 10_000).unwrap();
    assert_eq!(v.verdict, Verdict::SparseConsistent);

    let squares = SetGenerator::Powers(2).materialize(1_000_000).unwrap();
    let r = rates("sqrt(a) + 1", "0");
    let v = psr_check(&squares, &r, 100, 1000).unwrap();
    assert_eq!(v.verdict, Verdict::NotSparse);
    let Some(Witness::PsrViolation { a, b_t, b_s }) = v.witness else {
        panic!("expected a gap witness");
    };
    assert!(scan_gap(&squares, &r, a).is_some());
    assert!(b_t > r.f_at(a).unwrap() && b_s - b_t < a);
    assert!((100..a).all(|x| scan_gap(&squares, &r, x).is_none()));
}

#[test]
fn gap_check_agrees_with_direct_scan() {
    let sets = [
        SetGenerator::Factorials.materialize(100_000).unwrap(),
        SetGenerator::Powers(3).materialize(100_000).unwrap(),
        SetGenerator::Geometric(3).materialize(100_000).unwrap(),
        construct_from_psr(&rates("sqrt(a)", "0"), 100_000).unwrap(),
    ];
    let rate_list = [
        rates("sqrt(a)", "0"),
        rates("log2(a) + 1", "a"),
        factorial_rates(),
        rates("2*sqrt(a)", "1/3"),
    ];
    for b in &sets {
        for r in &rate_list {
            let hi = max_checkable_a(r, b.horizon(), 300).unwrap();
            let v = psr_check(b, r, 1, hi).unwrap();
            let first_bad = (1..=hi).find(|&a| scan_gap(b, r, a).is_some());
            match (v.witness, first_bad) {
                (None, None) => {}
                (Some(Witness::PsrViolation { a, .. }), Some(expected)) => assert_eq!(a, expected),
                (w, e) => panic!("{}: check {w:?}, scan {e:?}", r.to_inline()),
            }
        }
    }
}

#[test]
fn rates_from_ratios_for_factorials_and_powers_of_ten() {
    let fact = SetGenerator::Factorials.materialize(1_000_000_000).unwrap();
    let r = psr_from_ratios(&fact).unwrap();
    // band m!-(m-1)! < a <= (m+1)!-m! maps to (m-1)!
    for (a, expected) in [
        (2, 1),
        (4, 1),
        (5, 2),
        (18, 2),
        (19, 6),
        (96, 6),
        (97, 24),
        (600, 24),
        (601, 120),
    ] {
        assert_eq!(r.f_at(a).unwrap(), expected, "f({a})");
    }
    assert_eq!(r.g_at(1000).unwrap(), Rational::from_integer(0));

    let tens = SetGenerator::Geometric(10)
        .materialize(1_000_000_000)
        .unwrap();
    let r = psr_from_ratios(&tens).unwrap();
    // band 10^j - 10^(j-1) < a <= 10^(j+1) - 10^j maps to 10^(j-1)
    for (a, expected) in [
        (10, 1),
        (90, 1),
        (91, 10),
        (900, 10),
        (901, 100),
        (9000, 100),
    ] {
        assert_eq!(r.f_at(a).unwrap(), expected, "f({a})");
    }
    for b in [&fact, &tens] {
        let r = psr_from_ratios(b).unwrap();
        let hi = max_checkable_a(&r, b.horizon(), 10_000).unwrap();
        assert_eq!(
            psr_check(b, &r, 1, hi).unwrap().verdict,
            Verdict::SparseConsistent
        );
    }
}

#[test]
fn rates_from_ratios_reject_polynomial_growth() {
    let squares = SetGenerator::Powers(2).materialize(1_000_000).unwrap();
    assert!(psr_from_ratios(&squares).is_err());
}

#[test]
fn constructed_sets_follow_the_recursion() {
    let r = rates("sqrt(a)", "0");
    let b = construct_from_psr(&r, 10_000).unwrap();
    assert_eq!(&b.elements()[..5], &[1, 2, 5, 29, 869]);

    // independent rerun of the recursion with integer square roots
    let isqrt = |a: u64| (a as f64).sqrt() as u64;
    let mut expected = vec![1u64, 2];
    let mut cur = 2u64;
    loop {
        let a = (1..).find(|&a| isqrt(a) >= cur).unwrap() - 1;
        cur += a;
        if cur > 10_000 {
            break;
        }
        expected.push(cur);
    }
    assert_eq!(b.elements(), expected.as_slice());

    let bounded = rates("table[1:3]", "0");
    assert!(construct_from_psr(&bounded, 1000).is_err());
}

#[test]
fn the_two_forms_agree_on_constructed_sets() {
    for (f, g) in [
        ("sqrt(a)", "0"),
        ("log2(a) + 1", "a"),
        ("2*sqrt(a) + 3", "1/2"),
    ] {
        let r = rates(f, g);
        let b = construct_from_psr(&r, 1_000_000_000_000).unwrap();
        let v = ratio_test(&b, &targets(&[2, 10])).unwrap();
        assert_eq!(v.verdict, Verdict::SparseConsistent, "{f}, {g}");
        let derived = psr_from_ratios(&b).unwrap();
        let hi = max_checkable_a(&derived, b.horizon(), 5_000).unwrap();
        assert_eq!(
            psr_check(&b, &derived, 1, hi).unwrap().verdict,
            Verdict::SparseConsistent
        );
    }
}

#[test]
fn transformation_examples() {
    let s = strengthen_psr(&rates("7", "0")).unwrap();
    assert_eq!(s.f_at(1000).unwrap(), 7);
    assert_eq!(s.g_at(1000).unwrap(), Rational::from_integer(1000));
    let s = strengthen_psr(&rates("a", "a")).unwrap();
    assert_eq!(s.f_at(21).unwrap(), 42);
    assert_eq!(s.g_at(21).unwrap(), Rational::from_integer(42));

    let b = IntegerSet::new(vec![1, 2, 6, 24], 100).unwrap();
    let (up, r_up) = shift_up(&b, 10, &factorial_rates()).unwrap();
    assert_eq!(up.elements(), &[11, 12, 16, 34]);
    assert_eq!(
        r_up.f_at(19).unwrap(),
        factorial_rates().f_at(19).unwrap() + 10
    );
    let (down, _) = shift_down(&up, 10, &r_up);
    assert_eq!(down.elements(), b.elements());

    let small = IntegerSet::new(vec![1, 2, 6], 100).unwrap();
    assert!(shift_down(&small, 6, &factorial_rates()).0.is_empty());
    let (empty_up, _) = shift_up(&IntegerSet::empty(50).unwrap(), 3, &factorial_rates()).unwrap();
    assert!(empty_up.is_empty());

    let fact = SetGenerator::Factorials.materialize(1_000_000).unwrap();
    let prefix = IntegerSet::new(vec![5, 7], 1_000_000).unwrap();
    let (swapped, _) = replace_prefix(&fact, &prefix, &factorial_rates()).unwrap();
    assert_eq!(&swapped.elements()[..4], &[5, 7, 24, 120]);

    let head = fact.truncate(24).unwrap();
    let (same, _) = replace_prefix(&fact, &head, &factorial_rates()).unwrap();
    assert_eq!(same.elements(), fact.elements());
}
