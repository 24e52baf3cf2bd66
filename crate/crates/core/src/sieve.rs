//! Power-residue tests modulo single primes and scans over prime ranges.
//!
//! A scan turns an "almost every prime" claim into finite evidence: it lists
//! the primes in a window where no element of the set is a `k`-th power
//! residue. The prime 2 and every prime dividing `k` or an element's support
//! are always excluded, since the residue test says nothing about the local
//! field there.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arith::{self, gcd_u64, pow_mod_u64};
use crate::error::{Error, Result};
use crate::rational::{prime_factors_u64, FactoredRational};

/// Largest prime bound a scan will enumerate.
pub const SIEVE_CEILING: u64 = 1_000_000_000;

const SEGMENT_LEN: u64 = 1 << 16;

fn base_primes(hi: u64) -> Vec<u64> {
    arith::simple_sieve(arith::iroot(hi as u128, 2) as u64 + 1)
}

/// Primes in `[lo, hi]` using one sieve segment.
fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let lo = lo.max(2);
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        if p * p > hi {
            break;
        }
        let mut start = (lo.div_ceil(p) * p).max(p * p);
        while start <= hi {
            composite[(start - lo) as usize] = true;
            start += p;
        }
    }
    composite
        .iter()
        .enumerate()
        .filter(|&(_, &c)| !c)
        .map(|(i, _)| lo + i as u64)
        .collect()
}

fn segments(lo: u64, hi: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = hi.min(start.saturating_add(SEGMENT_LEN - 1));
        out.push((start, end));
        if end == u64::MAX {
            break;
        }
        start = end + 1;
    }
    out
}

fn check_range(lo: u64, hi: u64) -> Result<()> {
    if lo > hi {
        return Err(Error::InvalidArgument(format!("empty range [{lo}, {hi}]")));
    }
    if hi > SIEVE_CEILING {
        return Err(Error::RangeTooLarge { lo, hi, ceiling: SIEVE_CEILING });
    }
    Ok(())
}

/// All primes in `[lo, hi]`, by a segmented sieve.
pub fn primes_between(lo: u64, hi: u64) -> Result<Vec<u64>> {
    check_range(lo, hi)?;
    let base = base_primes(hi);
    Ok(segments(lo, hi).into_iter().flat_map(|(a, b)| sieve_segment(a, b, &base)).collect())
}

/// `a mod p` as an element of `[1, p - 1]`.
pub fn residue(a: &FactoredRational, p: u64) -> Result<u64> {
    if p < 3 || !arith::is_prime_u64(p) {
        return Err(Error::BadPrime(p));
    }
    let order = (p - 1) as i64;
    let mut acc: u64 = if a.is_negative() { p - 1 } else { 1 };
    for &(q, e) in a.factors() {
        let r = (q % p as u128) as u64;
        if r == 0 {
            return Err(Error::BadPrime(p));
        }
        let term = pow_mod_u64(r, e.rem_euclid(order) as u64, p);
        acc = ((acc as u128 * term as u128) % p as u128) as u64;
    }
    Ok(acc)
}

/// Euler's criterion for `k`-th powers: `a^((p-1)/d) = 1` with `d = gcd(k, p-1)`.
pub fn is_kth_power_mod_p(a: &FactoredRational, k: u64, p: u64) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let r = residue(a, p)?;
    let d = gcd_u64(k, p - 1);
    Ok(pow_mod_u64(r, (p - 1) / d, p) == 1)
}

pub fn set_has_kth_power_mod_p(set: &[FactoredRational], k: u64, p: u64) -> Result<bool> {
    for a in set {
        if is_kth_power_mod_p(a, k, p)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The primes a scan always skips: 2, the prime divisors of `k`, and the
/// support of every element.
pub fn default_exclusions(set: &[FactoredRational], k: u64) -> BTreeSet<u128> {
    let mut out: BTreeSet<u128> = BTreeSet::from([2]);
    out.extend(prime_factors_u64(k).into_iter().map(|(p, _)| p as u128));
    out.extend(set.iter().flat_map(|a| a.support()));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanParams {
    pub elements: Vec<FactoredRational>,
    pub k: u64,
    pub lo: u64,
    pub hi: u64,
    #[serde(with = "crate::wide")]
    pub excluded: Vec<u128>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveReport {
    pub params: ScanParams,
    pub failing_primes: Vec<u64>,
    pub tested_count: u64,
    /// `failing / tested` as a reduced `num/den` string.
    pub failing_density: String,
}

fn density(failing: u64, tested: u64) -> String {
    if tested == 0 {
        return "0/1".to_string();
    }
    let g = gcd_u64(failing, tested);
    format!("{}/{}", failing / g, tested / g)
}

impl SieveReport {
    /// Joins reports over adjacent windows of the same scan.
    pub fn merge(mut self, other: SieveReport) -> Result<SieveReport> {
        let same = self.params.elements == other.params.elements
            && self.params.k == other.params.k
            && self.params.excluded == other.params.excluded;
        if !same || other.params.lo != self.params.hi + 1 {
            return Err(Error::InvalidArgument("reports are not adjacent windows of one scan".into()));
        }
        self.params.hi = other.params.hi;
        self.failing_primes.extend(other.failing_primes);
        self.failing_primes.sort_unstable();
        self.tested_count += other.tested_count;
        self.failing_density = density(self.failing_primes.len() as u64, self.tested_count);
        Ok(self)
    }
}

fn scan_segment(
    set: &[FactoredRational],
    k: u64,
    window: (u64, u64),
    base: &[u64],
    excluded: &BTreeSet<u128>,
) -> (Vec<u64>, u64) {
    let mut failing = Vec::new();
    let mut tested = 0;
    for p in sieve_segment(window.0, window.1, base) {
        if excluded.contains(&(p as u128)) {
            continue;
        }
        tested += 1;
        // exclusions cover every support prime, so residues are defined
        let hit = set.iter().any(|a| is_kth_power_mod_p(a, k, p).unwrap_or(false));
        if !hit {
            failing.push(p);
        }
    }
    (failing, tested)
}

/// Scans the primes of `[lo, hi]` for failures of the set to contain a
/// `k`-th power residue. `excluded` is augmented with the default exclusions.
pub fn scan(
    set: &[FactoredRational],
    k: u64,
    lo: u64,
    hi: u64,
    excluded: &BTreeSet<u128>,
) -> Result<SieveReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    check_range(lo, hi)?;
    let mut excl = default_exclusions(set, k);
    excl.extend(excluded.iter().copied());
    let base = base_primes(hi);
    let windows = segments(lo, hi);

    #[cfg(feature = "parallel")]
    let parts: Vec<(Vec<u64>, u64)> = {
        use rayon::prelude::*;
        windows.par_iter().map(|&w| scan_segment(set, k, w, &base, &excl)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<(Vec<u64>, u64)> =
        windows.iter().map(|&w| scan_segment(set, k, w, &base, &excl)).collect();

    let mut failing_primes: Vec<u64> = Vec::new();
    let mut tested_count = 0;
    for (f, t) in parts {
        failing_primes.extend(f);
        tested_count += t;
    }
    failing_primes.sort_unstable();
    Ok(SieveReport {
        params: ScanParams {
            elements: set.to_vec(),
            k,
            lo,
            hi,
            excluded: excl.into_iter().collect(),
        },
        failing_density: density(failing_primes.len() as u64, tested_count),
        failing_primes,
        tested_count,
    })
}

/// Least non-excluded prime `<= bound` at which the set has no `k`-th power
/// residue.
pub fn find_counterexample(set: &[FactoredRational], k: u64, bound: u64) -> Option<u64> {
    if k <= 1 || bound < 3 {
        return None;
    }
    let bound = bound.min(SIEVE_CEILING);
    let excl = default_exclusions(set, k);
    let base = base_primes(bound);
    segments(3, bound).into_iter().find_map(|w| {
        let (failing, _) = scan_segment(set, k, w, &base, &excl);
        failing.first().copied()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> FactoredRational {
        s.parse().unwrap()
    }

    fn set(xs: &[&str]) -> Vec<FactoredRational> {
        xs.iter().map(|s| r(s)).collect()
    }

    fn brute_power(a: i64, k: u64, p: u64) -> bool {
        let target = a.rem_euclid(p as i64) as u64;
        (1..p).any(|x| pow_mod_u64(x, k, p) == target)
    }

    #[test]
    fn segmented_matches_simple_sieve() {
        let simple = arith::simple_sieve(300_000);
        assert_eq!(primes_between(0, 300_000).unwrap(), simple);
        let window: Vec<u64> = simple.iter().copied().filter(|&p| (131_000..=200_017).contains(&p)).collect();
        assert_eq!(primes_between(131_000, 200_017).unwrap(), window);
    }

    #[test]
    fn residue_examples() {
        assert!(!is_kth_power_mod_p(&r("2"), 3, 7).unwrap());
        assert!(is_kth_power_mod_p(&r("16"), 8, 17).unwrap());
        assert!(is_kth_power_mod_p(&r("1"), 5, 11).unwrap());
        assert!(set_has_kth_power_mod_p(&set(&["2", "3", "6", "18"]), 3, 7).unwrap());
        assert!(!set_has_kth_power_mod_p(&set(&["2", "3", "12"]), 3, 7).unwrap());
        assert!(set_has_kth_power_mod_p(&set(&["-27", "4"]), 6, 13).unwrap());
    }

    #[test]
    fn residue_rejects_bad_primes() {
        assert_eq!(is_kth_power_mod_p(&r("3"), 2, 2), Err(Error::BadPrime(2)));
        assert_eq!(is_kth_power_mod_p(&r("21"), 2, 7), Err(Error::BadPrime(7)));
        assert_eq!(is_kth_power_mod_p(&r("5/7"), 2, 7), Err(Error::BadPrime(7)));
    }

    #[test]
    fn agrees_with_enumeration() {
        for p in arith::simple_sieve(200).into_iter().filter(|&p| p > 2) {
            for a in -50i64..=50 {
                if a == 0 || a.rem_euclid(p as i64) == 0 {
                    continue;
                }
                let x = FactoredRational::from_int(a as i128).unwrap();
                for k in 1..=12 {
                    assert_eq!(is_kth_power_mod_p(&x, k, p).unwrap(), brute_power(a, k, p), "a={a} k={k} p={p}");
                }
            }
        }
    }

    #[test]
    fn rational_residues_use_inverses() {
        // 1/2 mod 7 = 4 = 2^2, a square
        assert!(is_kth_power_mod_p(&r("1/2"), 2, 7).unwrap());
        assert!(!is_kth_power_mod_p(&r("3/2"), 2, 7).unwrap());
    }

    #[test]
    fn scan_examples() {
        let rep = scan(&set(&["16"]), 8, 3, 10_000, &BTreeSet::from([2])).unwrap();
        assert!(rep.failing_primes.is_empty());
        let rep = scan(&set(&["2", "3", "12"]), 3, 5, 100, &BTreeSet::from([2, 3])).unwrap();
        assert!(rep.failing_primes.contains(&7));
        let rep = scan(&set(&["5"]), 1, 3, 50, &BTreeSet::from([5])).unwrap();
        assert!(rep.failing_primes.is_empty());
        // primes 3..=50 minus {5}: 14 - 1
        assert_eq!(rep.tested_count, 13);
        assert_eq!(rep.failing_density, "0/1");
    }

    #[test]
    fn scan_range_errors() {
        assert!(matches!(
            scan(&set(&["2"]), 3, 3, SIEVE_CEILING + 1, &BTreeSet::new()),
            Err(Error::RangeTooLarge { .. })
        ));
        assert!(matches!(scan(&set(&["2"]), 3, 10, 3, &BTreeSet::new()), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn counterexample_examples() {
        assert_eq!(find_counterexample(&set(&["2", "3", "12"]), 3, 100), Some(7));
        assert_eq!(find_counterexample(&set(&["2", "4", "8"]), 9, 100), Some(19));
        assert_eq!(find_counterexample(&set(&["1"]), 7, 1000), None);
    }

    #[test]
    fn partitioned_scans_merge_to_the_whole() {
        let s = set(&["2", "5", "-3/7"]);
        let whole = scan(&s, 6, 3, 150_000, &BTreeSet::new()).unwrap();
        let left = scan(&s, 6, 3, 77_777, &BTreeSet::new()).unwrap();
        let right = scan(&s, 6, 77_778, 150_000, &BTreeSet::new()).unwrap();
        assert_eq!(left.merge(right).unwrap(), whole);
    }
}
