//! Machine-word modular arithmetic, primality testing and factor splitting.
//!
//! Everything here works on `u128`. Products of residues below `2^64` use the
//! native 128-bit multiply; larger moduli fall back to a shift-and-add ladder,
//! which is slow but only reached for cofactors beyond the 64-bit range.

use std::sync::OnceLock;

/// Miller-Rabin with the first thirteen prime bases is deterministic below
/// this bound.
pub const DETERMINISTIC_MR_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

/// Trial division runs through every prime up to this limit.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

const MR_BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    gcd(a as u128, b as u128) as u64
}

#[inline]
fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

#[inline]
pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let mut a = a % m;
    let mut b = b % m;
    let mut acc = 0;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

pub fn pow_mod(base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

#[inline]
pub fn pow_mod_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut base = (base % m) as u128;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Modular inverse of `a` modulo a prime `p`.
pub fn inv_mod_prime(a: u64, p: u64) -> u64 {
    pow_mod_u64(a, p - 2, p)
}

/// Outcome of a primality query that may exceed the certified range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primality {
    Composite,
    Prime,
    /// Passed every base but lies above [`DETERMINISTIC_MR_BOUND`].
    ProbablePrime,
}

fn miller_rabin_witness(n: u128, a: u128, d: u128, r: u32) -> bool {
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return false;
    }
    for _ in 1..r {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return false;
        }
    }
    true
}

pub fn primality(n: u128) -> Primality {
    if n < 2 {
        return Primality::Composite;
    }
    for &p in &MR_BASES {
        if n == p {
            return Primality::Prime;
        }
        if n.is_multiple_of(p) {
            return Primality::Composite;
        }
    }
    let r = (n - 1).trailing_zeros();
    let d = (n - 1) >> r;
    for &a in &MR_BASES {
        if miller_rabin_witness(n, a, d, r) {
            return Primality::Composite;
        }
    }
    if n < DETERMINISTIC_MR_BOUND {
        Primality::Prime
    } else {
        Primality::ProbablePrime
    }
}

/// Certified primality; `false` for probable primes above the bound.
pub fn is_prime(n: u128) -> bool {
    primality(n) == Primality::Prime
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(n as u128)
}

/// Primes up to [`TRIAL_DIVISION_LIMIT`], computed once.
pub fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| simple_sieve(TRIAL_DIVISION_LIMIT))
}

/// Plain sieve of Eratosthenes over `[2, limit]`.
pub fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Floor of the `k`-th root of `n`.
pub fn iroot(n: u128, k: u32) -> u128 {
    if k == 1 || n < 2 {
        return n;
    }
    if k >= 128 {
        return 1;
    }
    let mut x = (n as f64).powf(1.0 / k as f64) as u128;
    // the float estimate is within a few units; walk to the exact floor
    while x > 0 && checked_pow(x, k).is_none_or(|v| v > n) {
        x -= 1;
    }
    while checked_pow(x + 1, k).is_some_and(|v| v <= n) {
        x += 1;
    }
    x
}

pub fn checked_pow(base: u128, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Returns `(root, k)` with `root^k = n` and `k` maximal, for `n >= 2`.
pub fn perfect_power(n: u128) -> (u128, u32) {
    let mut best = (n, 1);
    let bits = 128 - n.leading_zeros();
    for k in 2..bits {
        let r = iroot(n, k);
        if r >= 2 && checked_pow(r, k) == Some(n) {
            best = (r, k);
        }
    }
    best
}

fn rho_brent(n: u128, c: u128, max_iters: u64) -> Option<u128> {
    const BATCH: u64 = 128;
    let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
    let mut y = 2u128;
    let mut r: u64 = 1;
    let mut q: u128 = 1;
    let mut g: u128 = 1;
    let mut x = y;
    let mut ys = y;
    let mut iters = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd(q, n);
            k += BATCH;
            iters += BATCH;
        }
        r *= 2;
        if iters > max_iters {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// Finds a nontrivial factor of a composite `n`, or `None` if the iteration
/// budget runs out.
pub fn split_composite(n: u128) -> Option<u128> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let (root, k) = perfect_power(n);
    if k > 1 {
        return Some(root);
    }
    let budget: u64 = if n <= u64::MAX as u128 { 1 << 26 } else { 1 << 22 };
    (1..=16u128).find_map(|c| rho_brent(n, c, budget))
}
