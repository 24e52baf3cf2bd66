mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::*;
use locus::covering::{covers, CoverOutcome, Hyperplane};
use locus::prime_power::exponentiate_classes;
use locus::rational::{reduce_class, strip_power_layers};
use locus::sieve::scan;
use locus::verify::{consistency_check, verify};
use locus::{decide, decide_prime_power, DecideOptions, FactoredRational};

const PRIMES: [u128; 5] = [2, 3, 5, 7, 11];

fn rational() -> impl Strategy<Value = FactoredRational> {
    (any::<bool>(), prop::collection::vec(-6i64..=6, PRIMES.len())).prop_map(|(neg, exps)| {
        FactoredRational::from_prime_powers(neg, PRIMES.iter().copied().zip(exps))
    })
}

fn nonunit() -> impl Strategy<Value = FactoredRational> {
    rational().prop_filter("units carry no exponent data", |x| !x.is_unit())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn display_parse_round_trip(x in rational()) {
        let back: FactoredRational = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn machine_integers_parse_exactly(num in -10_000_000i64..10_000_000, den in 1i64..10_000) {
        prop_assume!(num != 0);
        let x: FactoredRational = format!("{num}/{den}").parse().unwrap();
        let (n, d) = x.to_i128_pair().unwrap();
        prop_assert_eq!(n * den as i128, num as i128 * d);
    }

    #[test]
    fn perfect_power_matches_root_search(base in -40i64..=40, e in 1u32..6, k in 1u64..8) {
        prop_assume!(base != 0);
        let v = (base as i128).pow(e);
        let x = FactoredRational::from_int(v).unwrap();
        // a rational k-th root of an integer is an integer; walk r^k up to |v|
        let brute = k == 1 || (1i128..).take_while(|r| r.pow(2) <= v.abs()).any(|r| {
            r.checked_pow(k as u32).is_some_and(|p| p == v || (k % 2 == 1 && -p == v))
        }) || (v.abs() == 1 && (v == 1 || k % 2 == 1));
        prop_assert_eq!(x.is_perfect_power(k), brute);
    }

    #[test]
    fn reduce_class_is_idempotent(x in rational(), k in 2u64..13) {
        let once = reduce_class(&x, k);
        prop_assert_eq!(reduce_class(&once.rep, k), once);
    }

    #[test]
    fn classes_ignore_kth_powers(x in rational(), t in nonunit(), k in 2u64..13) {
        let y = x.mul(&t.pow(k as i64));
        prop_assert_eq!(reduce_class(&x, k), reduce_class(&y, k));
    }

    #[test]
    fn stripping_reconstructs(x in nonunit(), q in prop::sample::select(vec![3u64, 5, 7])) {
        let (base, mu) = strip_power_layers(&x, q).unwrap();
        prop_assert!(!base.is_perfect_power(q));
        prop_assert_eq!(base.pow((q as i64).pow(mu)), x);
    }

    #[test]
    fn scans_split_and_merge(lo in 3u64..500, len in 0u64..3000, cut in 0u64..3000, k in 2u64..9) {
        let s = set(&["2", "-3", "10"]);
        let hi = lo + len;
        let mid = lo + cut.min(len);
        let whole = scan(&s, k, lo, hi, &BTreeSet::new()).unwrap();
        if mid < hi {
            let left = scan(&s, k, lo, mid, &BTreeSet::new()).unwrap();
            let right = scan(&s, k, mid + 1, hi, &BTreeSet::new()).unwrap();
            prop_assert_eq!(left.merge(right).unwrap(), whole.clone());
        }
        // a larger set can only remove failures
        let mut bigger = s.clone();
        bigger.push("7".parse().unwrap());
        let more = scan(&bigger, k, lo, hi, &BTreeSet::new()).unwrap();
        prop_assert!(more.failing_primes.iter().all(|p| whole.failing_primes.contains(p)));
    }

    #[test]
    fn covering_agrees_with_listing(
        q in prop::sample::select(vec![2u64, 3, 5, 9]),
        rows in prop::collection::vec(prop::collection::vec(0u64..9, 2), 1..6),
    ) {
        let planes: Vec<Hyperplane> = rows.iter().filter_map(|r| Hyperplane::new(r.iter().map(|c| c % q).collect())).collect();
        prop_assume!(!planes.is_empty());
        let mut least = None;
        'outer: for a in 0..q {
            for b in 0..q {
                if planes.iter().all(|h| h.eval(&[a, b], q) != 0) {
                    least = Some(vec![a, b]);
                    break 'outer;
                }
            }
        }
        match covers(&planes, q, 2, 1 << 20).unwrap() {
            CoverOutcome::Covered { .. } => prop_assert!(least.is_none()),
            CoverOutcome::Uncovered { point } => prop_assert_eq!(Some(point), least),
        }
    }

    #[test]
    fn unit_exponents_keep_the_verdict(
        s in prop::collection::vec(nonunit(), 1..4),
        c in prop::collection::vec(prop::sample::select(vec![-4i64, -2, -1, 1, 2, 4, 5, 7]), 3),
    ) {
        let opts = DecideOptions::default();
        let c = &c[..s.len()];
        let before = decide_prime_power(&s, 3, 1, &opts).unwrap().status;
        let after = decide_prime_power(&exponentiate_classes(&s, c, 3).unwrap(), 3, 1, &opts).unwrap().status;
        prop_assert_eq!(before, after);
    }

    #[test]
    fn decisions_verify_and_respect_the_sieve(
        s in prop::collection::vec(rational(), 1..5),
        n in prop::sample::select(vec![2u64, 3, 4, 5, 6, 8, 9, 12]),
    ) {
        let opts = DecideOptions { evidence: true, evidence_bound: 2000, ..Default::default() };
        let v = decide(&s, n, &opts).unwrap();
        prop_assert!(verify(&s, n, &v).is_ok(), "{:?}", verify(&s, n, &v));
        prop_assert!(consistency_check(&s, n, &v, 2000).is_ok());
    }
}
