//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the residue or covering code of the crate.

#![allow(dead_code)]

use locus::FactoredRational;

pub fn r(s: &str) -> FactoredRational {
    s.parse().unwrap()
}

pub fn set(xs: &[&str]) -> Vec<FactoredRational> {
    xs.iter().map(|s| r(s)).collect()
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// `x mod p` for a rational whose numerator and denominator fit in `i128`.
fn reduce(x: &FactoredRational, p: u64) -> Option<u64> {
    let (num, den) = x.to_i128_pair()?;
    let p128 = p as i128;
    let n = num.rem_euclid(p128) as u64;
    let d = den.rem_euclid(p128) as u64;
    if n == 0 || d == 0 {
        return None;
    }
    Some(n * pow_mod(d, p - 2, p) % p)
}

/// Every `k`-th power in `F_p^×`, by listing `x^k` for all `x`.
pub fn kth_powers(k: u64, p: u64) -> Vec<bool> {
    let mut hit = vec![false; p as usize];
    for x in 1..p {
        hit[pow_mod(x, k, p) as usize] = true;
    }
    hit
}

fn excluded(set: &[FactoredRational], k: u64, p: u64) -> bool {
    p == 2 || k.is_multiple_of(p) || set.iter().any(|x| x.support().any(|q| q == p as u128))
}

/// Least admissible prime up to `bound` where no element is a `k`-th power.
pub fn least_failing_prime(set: &[FactoredRational], k: u64, bound: u64) -> Option<u64> {
    (3..=bound).filter(|&p| is_prime(p) && !excluded(set, k, p)).find(|&p| {
        let powers = kth_powers(k, p);
        set.iter().all(|x| !powers[reduce(x, p).expect("admissible prime") as usize])
    })
}

/// True when some odd-size subset multiplies to a perfect square, tried by
/// listing every subset.
pub fn odd_square_subset(values: &[i128]) -> bool {
    (1u32..1 << values.len()).filter(|m| m.count_ones() % 2 == 1).any(|mask| {
        let prod: i128 = (0..values.len()).filter(|j| mask >> j & 1 == 1).map(|j| values[j]).product();
        prod >= 0 && {
            let s = (prod as f64).sqrt().round() as i128;
            (s - 1..=s + 1).any(|t| t >= 0 && t * t == prod)
        }
    })
}

/// `∏ p_i^{e_i}` over the given primes.
pub fn from_exponents(primes: &[u128], exps: &[i64]) -> FactoredRational {
    FactoredRational::from_prime_powers(false, primes.iter().copied().zip(exps.iter().copied()))
}

/// All exponent vectors in `[0, q)^s` as integers on `primes`.
pub fn columns(q: u64, primes: &[u128]) -> Vec<FactoredRational> {
    let s = primes.len();
    (0..q.pow(s as u32))
        .map(|mut i| {
            let mut exps = vec![0i64; s];
            for e in exps.iter_mut().rev() {
                *e = (i % q) as i64;
                i /= q;
            }
            from_exponents(primes, &exps)
        })
        .collect()
}

/// Subsets of `items` with `1..=max` elements, in lexicographic index order.
pub fn subsets<T: Clone>(items: &[T], max: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    fn go<T: Clone>(items: &[T], start: usize, max: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max {
            return;
        }
        for i in start..items.len() {
            cur.push(items[i].clone());
            go(items, i + 1, max, cur, out);
            cur.pop();
        }
    }
    go(items, 0, max, &mut Vec::new(), &mut out);
    out
}
