//! Odd prime-power exponents `q^m`, and the subset-pair oracle.
//!
//! The production route strips `q`-th root layers from every element and
//! checks the stripped set for `q`-th powers: if that fails, the original set
//! fails for `q^m` as well. Stripping is only a one-way implication, so a
//! covered stripped set is confirmed by covering the original exponent
//! vectors over `(Z/q^m)^s` before a `Holds` is issued.
//!
//! The oracle enumerates exponent tuples and subset pairs literally. It is
//! slow and exists to cross-check the production route.

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::covering::cover_decision;
use crate::error::{Error, Result};
use crate::rational::{dedup_by_class, joint_support, reduce_class, strip_power_layers, FactoredRational};
use crate::sieve::find_counterexample;
use crate::verdict::{Certificate, CoverRow, DecideOptions, Status, Verdict};

/// An exponent tuple `c` (entries mod `modulus = q^m`) for which no pair of
/// disjoint index sets `B, C` with `|B| ≢ |C| (mod q)` makes
/// `∏_B a_j^{c_j} / ∏_C a_j^{c_j}` a perfect `modulus`-th power.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkalbaWitness {
    pub q: u64,
    pub modulus: u64,
    pub elements: Vec<FactoredRational>,
    pub c: Vec<u64>,
}

fn check_odd_prime_power(q: u64, m: u32) -> Result<u64> {
    if q < 3 || !arith::is_prime_u64(q) {
        return Err(Error::InvalidArgument(format!("{q} is not an odd prime")));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    q.checked_pow(m).ok_or_else(|| Error::InvalidArgument(format!("{q}^{m} overflows")))
}

fn stripped(x: &FactoredRational, q: u64, m: u32) -> Result<(FactoredRational, u32)> {
    let (base, mu) = strip_power_layers(x, q)?;
    if mu >= m {
        return Err(Error::PerfectPowerPresent(x.to_string()));
    }
    Ok((reduce_class(&base, q).rep, mu))
}

/// Replaces each element by the `q`-class of its stripped base. Fails if an
/// element is already a perfect `q^m`-th power.
pub fn reduce_to_prime_case(set: &[FactoredRational], q: u64, m: u32) -> Result<Vec<FactoredRational>> {
    check_odd_prime_power(q, m)?;
    set.iter().map(|x| stripped(x, q, m).map(|(b, _)| b)).collect()
}

/// Decides whether `set` contains a `q^m`-th power in `Q_p` for almost
/// every prime `p`.
pub fn decide_prime_power(set: &[FactoredRational], q: u64, m: u32, opts: &DecideOptions) -> Result<Verdict> {
    let modulus = check_odd_prime_power(q, m)?;
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if let Some(x) = set.iter().find(|x| x.is_perfect_power(modulus)) {
        let cert = Certificate::PerfectPowerMember {
            element: x.clone(),
            root: x.exact_root(modulus).expect("perfect power"),
            exponent: modulus,
        };
        return Ok(Verdict::new(Status::Holds, cert, set, q));
    }

    let mut rows: Vec<CoverRow> = Vec::new();
    for x in set {
        let (base, layers) = stripped(x, q, m)?;
        if !rows.iter().any(|r| r.base == base) {
            rows.push(CoverRow { source: x.clone(), base, layers });
        }
    }
    let (mut status, mut cert) = cover_decision(rows, q, opts)?;

    if status == Status::Holds && m > 1 {
        let ring_rows = dedup_by_class(set, modulus)
            .into_iter()
            .map(|(i, c)| CoverRow { source: set[i].clone(), base: c.rep, layers: 0 })
            .collect();
        (status, cert) = cover_decision(ring_rows, modulus, opts)?;
    }

    let mut verdict = Verdict::new(status, cert, set, q);
    if status == Status::Fails && opts.evidence {
        verdict.counterexample = find_counterexample(set, modulus, opts.evidence_bound);
    }
    Ok(verdict)
}

/// Raises each `a_j` to `c_j`; every `c_j` must be prime to `q`.
pub fn exponentiate_classes(set: &[FactoredRational], c: &[i64], q: u64) -> Result<Vec<FactoredRational>> {
    if set.len() != c.len() {
        return Err(Error::WrongCardinality { expected: set.len(), got: c.len() });
    }
    if let Some(&bad) = c.iter().find(|&&cj| cj.rem_euclid(q as i64) == 0) {
        return Err(Error::NonUnitExponent(bad, q));
    }
    Ok(set.iter().zip(c).map(|(a, &cj)| a.pow(cj)).collect())
}

/// Exponent data for the oracle: support exponents plus sign per element.
struct OracleData {
    q: u64,
    modulus: u64,
    vectors: Vec<Vec<i64>>,
    negative: Vec<bool>,
}

impl OracleData {
    fn new(set: &[FactoredRational], q: u64, modulus: u64) -> Self {
        let support = joint_support(set);
        OracleData {
            q,
            modulus,
            vectors: set.iter().map(|x| x.exponent_vector(&support)).collect(),
            negative: set.iter().map(|x| x.is_negative()).collect(),
        }
    }

    /// Whether `∏_B a^c / ∏_C a^c` is a perfect `modulus`-th power, where
    /// `in_b`/`in_c` select the index sets (not necessarily disjoint).
    fn ratio_is_power(&self, c: &[u64], in_b: &[bool], in_c: &[bool]) -> bool {
        let dims = self.vectors.first().map_or(0, |v| v.len());
        let mut exps = vec![0i64; dims];
        let mut negative = false;
        for j in 0..c.len() {
            let cj = c[j] as i64;
            for (side, sign) in [(in_b[j], 1i64), (in_c[j], -1i64)] {
                if side {
                    for (e, v) in exps.iter_mut().zip(&self.vectors[j]) {
                        *e += sign * cj * v;
                    }
                    negative ^= self.negative[j] && cj % 2 != 0;
                }
            }
        }
        let k = self.modulus as i64;
        exps.iter().all(|e| e % k == 0) && !(negative && k % 2 == 0)
    }

    fn size_gap_ok(&self, in_b: &[bool], in_c: &[bool]) -> bool {
        let b = in_b.iter().filter(|&&x| x).count() as i64;
        let c = in_c.iter().filter(|&&x| x).count() as i64;
        (b - c).rem_euclid(self.q as i64) != 0
    }

    /// Disjoint pairs only: each index goes to `B`, `C`, or neither.
    fn has_pair(&self, c: &[u64]) -> bool {
        let l = c.len();
        let mut in_b = vec![false; l];
        let mut in_c = vec![false; l];
        for code in 0..3u64.pow(l as u32) {
            let mut t = code;
            for j in 0..l {
                in_b[j] = t % 3 == 1;
                in_c[j] = t % 3 == 2;
                t /= 3;
            }
            if self.size_gap_ok(&in_b, &in_c) && self.ratio_is_power(c, &in_b, &in_c) {
                return true;
            }
        }
        false
    }

    /// Arbitrary (possibly overlapping) pairs, used to re-check witnesses.
    fn has_any_pair(&self, c: &[u64]) -> bool {
        let l = c.len();
        let mut in_b = vec![false; l];
        let mut in_c = vec![false; l];
        for code in 0..4u64.pow(l as u32) {
            for j in 0..l {
                in_b[j] = code >> (2 * j) & 1 == 1;
                in_c[j] = code >> (2 * j + 1) & 1 == 1;
            }
            if self.size_gap_ok(&in_b, &in_c) && self.ratio_is_power(c, &in_b, &in_c) {
                return true;
            }
        }
        false
    }
}

/// True iff no subset pair (overlapping or not) rescues the tuple `c`.
pub fn witness_is_valid(w: &SkalbaWitness) -> bool {
    w.c.len() == w.elements.len()
        && !OracleData::new(&w.elements, w.q, w.modulus).has_any_pair(&w.c)
}

/// Brute-force subset-pair criterion over all tuples in `(Z/q^m)^ℓ`.
pub fn skalba_oracle(set: &[FactoredRational], q: u64, m: u32, opts: &DecideOptions) -> Result<Verdict> {
    let modulus = check_odd_prime_power(q, m)?;
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if set.len() > opts.oracle_max_len {
        return Err(Error::OracleLimitExceeded(format!(
            "{} elements exceed the limit {}",
            set.len(),
            opts.oracle_max_len
        )));
    }
    if modulus > opts.oracle_max_modulus {
        return Err(Error::OracleLimitExceeded(format!(
            "modulus {modulus} exceeds the limit {}",
            opts.oracle_max_modulus
        )));
    }
    let data = OracleData::new(set, q, modulus);
    let l = set.len();
    let total = modulus.pow(l as u32);
    let mut c = vec![0u64; l];
    for index in 0..total {
        let mut t = index;
        for slot in c.iter_mut().rev() {
            *slot = t % modulus;
            t /= modulus;
        }
        if !data.has_pair(&c) {
            let witness = SkalbaWitness { q, modulus, elements: set.to_vec(), c: c.clone() };
            assert!(witness_is_valid(&witness), "oracle witness failed the overlapping-pair re-check");
            return Ok(Verdict::new(Status::Fails, Certificate::SkalbaWitness(witness), set, q));
        }
    }
    let cert = Certificate::OracleExhausted { modulus, elements: set.to_vec(), tuples_checked: total };
    Ok(Verdict::new(Status::Holds, cert, set, q))
}
