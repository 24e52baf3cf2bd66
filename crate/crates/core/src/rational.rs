//! Exact arithmetic on nonzero rationals kept in factored form.
//!
//! A [`FactoredRational`] is a sign together with a list of `(prime, exponent)`
//! pairs, primes strictly increasing and exponents nonzero. Denominators carry
//! negative exponents. Every decision in the crate works on these exponent
//! vectors; the decimal value is only materialised for display.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{self, Primality, TRIAL_DIVISION_LIMIT};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactoredRational {
    negative: bool,
    factors: Vec<(u128, i64)>,
}

impl FactoredRational {
    pub fn one() -> Self {
        FactoredRational { negative: false, factors: Vec::new() }
    }

    pub fn minus_one() -> Self {
        FactoredRational { negative: true, factors: Vec::new() }
    }

    /// Builds a value from prime/exponent pairs. Primes are trusted to be
    /// prime; repeated primes are merged and zero exponents dropped.
    pub fn from_prime_powers(negative: bool, pairs: impl IntoIterator<Item = (u128, i64)>) -> Self {
        let mut map: BTreeMap<u128, i64> = BTreeMap::new();
        for (p, e) in pairs {
            *map.entry(p).or_insert(0) += e;
        }
        FactoredRational {
            negative,
            factors: map.into_iter().filter(|&(_, e)| e != 0).collect(),
        }
    }

    /// A prime raised to `e`, unchecked.
    pub fn prime_power(p: u128, e: i64) -> Self {
        Self::from_prime_powers(false, [(p, e)])
    }

    pub fn from_int(n: i128) -> Result<Self> {
        factor(n, 1)
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn factors(&self) -> &[(u128, i64)] {
        &self.factors
    }

    pub fn support(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn exponent_of(&self, p: u128) -> i64 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        !self.negative && self.factors.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e > 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_prime_powers(
            self.negative ^ other.negative,
            self.factors.iter().chain(other.factors.iter()).copied(),
        )
    }

    pub fn inv(&self) -> Self {
        FactoredRational {
            negative: self.negative,
            factors: self.factors.iter().map(|&(p, e)| (p, -e)).collect(),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn pow(&self, k: i64) -> Self {
        if k == 0 {
            return Self::one();
        }
        FactoredRational {
            negative: self.negative && k % 2 != 0,
            factors: self.factors.iter().map(|&(p, e)| (p, e * k)).collect(),
        }
    }

    /// True iff `self = r^k` for a rational `r`.
    pub fn is_perfect_power(&self, k: u64) -> bool {
        assert!(k >= 1, "exponent must be positive");
        let k = k as i64;
        self.factors.iter().all(|&(_, e)| e % k == 0) && !(self.negative && k % 2 == 0)
    }

    /// The rational `r` with `r^k = self`, choosing `r > 0` when `k` is even.
    pub fn exact_root(&self, k: u64) -> Option<Self> {
        if !self.is_perfect_power(k) {
            return None;
        }
        let k = k as i64;
        Some(FactoredRational {
            negative: self.negative,
            factors: self.factors.iter().map(|&(p, e)| (p, e / k)).collect(),
        })
    }

    pub fn exponent_vector(&self, support: &[u128]) -> Vec<i64> {
        support.iter().map(|&p| self.exponent_of(p)).collect()
    }

    pub fn numerator(&self) -> BigUint {
        self.factors
            .iter()
            .filter(|&&(_, e)| e > 0)
            .fold(BigUint::from(1u8), |acc, &(p, e)| acc * BigUint::from(p).pow(e as u32))
    }

    pub fn denominator(&self) -> BigUint {
        self.factors
            .iter()
            .filter(|&&(_, e)| e < 0)
            .fold(BigUint::from(1u8), |acc, &(p, e)| acc * BigUint::from(p).pow((-e) as u32))
    }

    /// Numerator and denominator as machine integers, when they fit.
    pub fn to_i128_pair(&self) -> Option<(i128, i128)> {
        let num = i128::try_from(u128::try_from(self.numerator()).ok()?).ok()?;
        let den = i128::try_from(u128::try_from(self.denominator()).ok()?).ok()?;
        Some((if self.negative { -num } else { num }, den))
    }
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negative { "-" } else { "" };
        write!(f, "{sign}{}/{}", self.numerator(), self.denominator())
    }
}

impl FromStr for FactoredRational {
    type Err = Error;

    /// Accepts an optional sign, then `integer` or `numerator/denominator`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Parse(s.to_string());
        let (negative, body) = match t.as_bytes().first() {
            Some(b'-') => (true, &t[1..]),
            Some(b'+') => (false, &t[1..]),
            _ => (false, t),
        };
        let (num, den) = match body.split_once('/') {
            Some((n, d)) => (n, d),
            None => (body, "1"),
        };
        let digits = |x: &str| -> Result<u128> {
            if x.is_empty() || !x.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            x.parse::<u128>().map_err(|_| {
                Error::FactorizationCapacityExceeded(format!("`{x}` does not fit in 128 bits"))
            })
        };
        let num = digits(num)?;
        let den = digits(den)?;
        if den == 0 {
            return Err(bad());
        }
        if num == 0 {
            return Err(Error::ZeroInput);
        }
        let mut value = factor_u128(num)?;
        value = value.div(&factor_u128(den)?);
        value.negative = negative;
        Ok(value)
    }
}

impl Serialize for FactoredRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FactoredRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Complete factorization of a positive integer.
fn factor_u128(n: u128) -> Result<FactoredRational> {
    debug_assert!(n > 0);
    let mut pairs: Vec<(u128, i64)> = Vec::new();
    let mut m = n;
    for &p in arith::small_primes() {
        let p = p as u128;
        if p * p > m {
            break;
        }
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    }
    if m > 1 {
        let limit = TRIAL_DIVISION_LIMIT as u128;
        if m < limit * limit {
            pairs.push((m, 1));
        } else {
            let mut pending = vec![m];
            while let Some(c) = pending.pop() {
                match arith::primality(c) {
                    Primality::Prime => pairs.push((c, 1)),
                    Primality::ProbablePrime => {
                        return Err(Error::FactorizationCapacityExceeded(format!(
                            "cofactor {c} cannot be certified prime"
                        )))
                    }
                    Primality::Composite => match arith::split_composite(c) {
                        Some(f) => {
                            pending.push(f);
                            pending.push(c / f);
                        }
                        None => {
                            return Err(Error::FactorizationCapacityExceeded(format!(
                                "composite cofactor {c} resisted splitting"
                            )))
                        }
                    },
                }
            }
        }
    }
    Ok(FactoredRational::from_prime_powers(false, pairs))
}

/// Factors `num/den` completely.
pub fn factor(num: i128, den: i128) -> Result<FactoredRational> {
    if num == 0 {
        return Err(Error::ZeroInput);
    }
    if den == 0 {
        return Err(Error::InvalidArgument("zero denominator".into()));
    }
    let negative = (num < 0) ^ (den < 0);
    let mut value = factor_u128(num.unsigned_abs())?.div(&factor_u128(den.unsigned_abs())?);
    value.negative = negative;
    Ok(value)
}

/// Multiplies every element by `(b_1 ⋯ b_k)^n`, where `b_j` are the
/// denominators, so the outputs are integers in the same classes modulo
/// `n`-th powers.
pub fn clear_denominators(set: &[FactoredRational], n: u64) -> Vec<FactoredRational> {
    let denominators = FactoredRational::from_prime_powers(
        false,
        set.iter()
            .flat_map(|x| x.factors().iter().filter(|&&(_, e)| e < 0).map(|&(p, e)| (p, -e))),
    );
    let scale = denominators.pow(n as i64);
    set.iter().map(|x| x.mul(&scale)).collect()
}

pub fn is_perfect_power(x: &FactoredRational, k: u64) -> bool {
    x.is_perfect_power(k)
}

/// Representative of a class in `Q^× / (Q^×)^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PowerClass {
    pub modulus: u64,
    pub rep: FactoredRational,
}

impl PowerClass {
    pub fn is_trivial(&self) -> bool {
        self.rep.is_one()
    }
}

/// Reduces exponents into `[0, k)`; for odd `k` the sign is absorbed.
pub fn reduce_class(x: &FactoredRational, k: u64) -> PowerClass {
    assert!(k >= 2, "class modulus must be at least 2");
    let ki = k as i64;
    let rep = FactoredRational {
        negative: x.negative && k.is_multiple_of(2),
        factors: x
            .factors
            .iter()
            .map(|&(p, e)| (p, e.rem_euclid(ki)))
            .filter(|&(_, e)| e != 0)
            .collect(),
    };
    PowerClass { modulus: k, rep }
}

/// Writes `x = base^(q^mu)` with `mu` maximal, so `base` is not a perfect
/// `q`-th power.
pub fn strip_power_layers(x: &FactoredRational, q: u64) -> Result<(FactoredRational, u32)> {
    if x.is_unit() {
        return Err(Error::UnitInput);
    }
    let mut base = x.clone();
    let mut mu = 0;
    while let Some(root) = base.exact_root(q) {
        base = root;
        mu += 1;
    }
    Ok((base, mu))
}

/// Drops elements whose class modulo `k` already occurred, keeping the first.
pub fn dedup_by_class(set: &[FactoredRational], k: u64) -> Vec<(usize, PowerClass)> {
    let mut seen = std::collections::HashSet::new();
    set.iter()
        .enumerate()
        .map(|(i, x)| (i, reduce_class(x, k)))
        .filter(|(_, c)| seen.insert(c.clone()))
        .collect()
}

/// Sorted union of the prime supports.
pub fn joint_support(set: &[FactoredRational]) -> Vec<u128> {
    let mut primes: Vec<u128> = set.iter().flat_map(|x| x.support()).collect();
    primes.sort_unstable();
    primes.dedup();
    primes
}

/// Prime factors of a positive machine integer.
pub fn prime_factors_u64(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m.is_multiple_of(p) {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}
