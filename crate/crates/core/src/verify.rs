//! Independent re-checking of verdicts.
//!
//! Verification recomputes every claim a certificate makes from the decided
//! set alone. The consistency check is a separate tripwire: a `Holds` verdict
//! must never meet a sieve failure outside its excluded primes.

use crate::arith;
use crate::classifier::{match_exceptional_pair, shape, template};
use crate::covering::{covers, CoverOutcome, Hyperplane};
use crate::error::Error;
use crate::prime_power::{skalba_oracle, witness_is_valid};
use crate::rational::{dedup_by_class, reduce_class, strip_power_layers, FactoredRational};
use crate::sieve::{scan, set_has_kth_power_mod_p};
use crate::verdict::{exclusions, Certificate, CoverData, DecideOptions, Status, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("certificate rejected: {0}")]
    Rejected(String),
    #[error("verdict contradicts sieve evidence: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Engine(#[from] Error),
}

type Check = std::result::Result<(), VerifyError>;

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(VerifyError::Rejected(why()))
    }
}

/// Re-checks `verdict` as an answer for `set` and exponent `n`.
pub fn verify(set: &[FactoredRational], n: u64, verdict: &Verdict) -> Check {
    verify_with(set, n, verdict, &DecideOptions::default())
}

/// As [`verify`], with the enumeration ceiling and oracle limits of `opts`.
pub fn verify_with(set: &[FactoredRational], n: u64, verdict: &Verdict, opts: &DecideOptions) -> Check {
    ensure(!set.is_empty() && n >= 2, || "empty set or exponent below 2".into())?;
    let required = exclusions(set, n);
    ensure(verdict.excluded_primes.is_superset(&required), || {
        "excluded primes miss 2, a prime of the exponent, or a support prime".into()
    })?;
    if let Some(p) = verdict.counterexample {
        ensure(verdict.status == Status::Fails, || "counterexample attached to a non-failing verdict".into())?;
        ensure(arith::is_prime_u64(p) && !verdict.excluded_primes.contains(&(p as u128)), || {
            format!("counterexample {p} is not an admissible prime")
        })?;
        if set_has_kth_power_mod_p(set, n, p)? {
            return Err(VerifyError::Inconsistent(format!("the set has an {n}-th power residue mod {p}")));
        }
    }
    check_certificate(set, n, verdict.status, &verdict.certificate, opts)
}

fn expected_status(cert: &Certificate) -> Status {
    use Certificate::*;
    match cert {
        PerfectPowerMember { .. } | WangException { .. } | ExceptionalForm(_) | HyperplaneCover(_)
        | OddSubsetWitness(_) | OracleExhausted { .. } | Lifted { .. } => Status::Holds,
        UncoveredPoint(_) | SkalbaWitness(_) | ComponentFailure { .. } | SingletonCriterion { .. }
        | PairCriterion { .. } | CardinalityBound { .. } => Status::Fails,
        Sampled { .. } | Evidence(_) => Status::Inconclusive,
    }
}

fn is_member(set: &[FactoredRational], x: &FactoredRational) -> bool {
    set.contains(x)
}

/// The class a covering row must carry for `x`: the class modulo `modulus`
/// itself when it equals `n`, otherwise the class of the stripped base when
/// `n` is a higher power of the prime `modulus`.
fn row_class(x: &FactoredRational, modulus: u64, n: u64) -> Result<FactoredRational, VerifyError> {
    if modulus == n {
        return Ok(reduce_class(x, modulus).rep);
    }
    let m = power_exponent(modulus, n)
        .ok_or_else(|| VerifyError::Rejected(format!("modulus {modulus} does not fit exponent {n}")))?;
    ensure(modulus % 2 == 1 && arith::is_prime_u64(modulus), || format!("{modulus} is not an odd prime"))?;
    ensure(!x.is_perfect_power(n), || format!("{x} is a perfect {n}-th power"))?;
    let (base, mu) = strip_power_layers(x, modulus)?;
    ensure(mu < m, || format!("{x} has too many root layers"))?;
    Ok(reduce_class(&base, modulus).rep)
}

/// `m` with `q^m = n`, for `m >= 1`.
fn power_exponent(q: u64, n: u64) -> Option<u32> {
    let mut acc = q;
    let mut m = 1;
    while acc < n {
        acc = acc.checked_mul(q)?;
        m += 1;
    }
    (acc == n).then_some(m)
}

fn check_cover_data(set: &[FactoredRational], n: u64, data: &CoverData, holds: bool, opts: &DecideOptions) -> Check {
    let modulus = data.modulus;
    ensure(modulus >= 2 && !data.rows.is_empty(), || "empty covering system".into())?;
    ensure(data.coeffs.len() == data.rows.len(), || "one linear form per row expected".into())?;
    let signed = data.support.first() == Some(&-1);
    ensure(signed == (modulus == 2), || "a sign coordinate is used exactly for squares".into())?;
    let primes: Vec<u128> = data.support.iter().skip(signed as usize).map(|&p| p as u128).collect();
    ensure(primes.windows(2).all(|w| w[0] < w[1]) && primes.iter().all(|&p| arith::is_prime(p)), || {
        "support is not a sorted list of primes".into()
    })?;

    let mut bases = Vec::new();
    for (row, coeffs) in data.rows.iter().zip(&data.coeffs) {
        ensure(row.base.support().all(|p| primes.contains(&p)), || format!("support misses a prime of {}", row.base))?;
        let mut want: Vec<u64> = Vec::new();
        if signed {
            want.push(row.base.is_negative() as u64);
        }
        want.extend(primes.iter().map(|&p| row.base.exponent_of(p).rem_euclid(modulus as i64) as u64));
        ensure(&want == coeffs, || format!("linear form of {} does not match its exponents", row.base))?;
        ensure(want.iter().any(|&c| c != 0), || format!("{} gives the zero form", row.base))?;
        let class = row_class(&row.source, modulus, n)?;
        ensure(class == reduce_class(&row.base, modulus).rep, || {
            format!("row base {} does not reduce {}", row.base, row.source)
        })?;
        bases.push(class);
    }

    let planes: Vec<Hyperplane> = data.coeffs.iter().filter_map(|c| Hyperplane::new(c.clone())).collect();
    if holds {
        ensure(modulus == n, || "a cover proves the claim only at its own modulus".into())?;
        for b in &bases {
            ensure(set.iter().any(|x| reduce_class(x, modulus).rep == *b), || format!("row {b} is not from the set"))?;
        }
        ensure(data.point.is_none(), || "cover certificates carry no point".into())?;
        let outcome = covers(&planes, modulus, data.support.len(), opts.enumeration_ceiling)?;
        ensure(matches!(outcome, CoverOutcome::Covered { .. }), || "the forms do not cover the space".into())
    } else {
        for x in set {
            let c = row_class(x, modulus, n)?;
            ensure(bases.contains(&c), || format!("{x} has no row"))?;
        }
        let point = data.point.as_ref().ok_or_else(|| VerifyError::Rejected("missing point".into()))?;
        ensure(point.len() == data.support.len() && point.iter().all(|&c| c < modulus), || {
            "point lies outside the space".into()
        })?;
        ensure(planes.iter().all(|h| h.eval(point, modulus) != 0), || "a form vanishes at the point".into())
    }
}

fn classes_of(set: &[FactoredRational], n: u64) -> Vec<FactoredRational> {
    dedup_by_class(set, n).into_iter().map(|(i, _)| set[i].clone()).collect()
}

fn check_certificate(set: &[FactoredRational], n: u64, status: Status, cert: &Certificate, opts: &DecideOptions) -> Check {
    ensure(expected_status(cert) == status, || format!("{} does not certify {status:?}", cert.kind()))?;
    match cert {
        Certificate::PerfectPowerMember { element, root, exponent } => {
            ensure(*exponent == n, || format!("exponent {exponent} differs from {n}"))?;
            ensure(is_member(set, element), || format!("{element} is not in the set"))?;
            ensure(root.pow(n as i64) == *element, || format!("{root}^{n} is not {element}"))
        }
        Certificate::WangException { element, b, n: k } => {
            ensure(*k == n && n.is_multiple_of(8), || "the Wang form needs 8 | n".into())?;
            ensure(is_member(set, element), || format!("{element} is not in the set"))?;
            let rebuilt = FactoredRational::prime_power(2, (n / 2) as i64).mul(&b.pow(n as i64));
            ensure(rebuilt == *element, || format!("{element} is not 2^(n/2) * {b}^n"))
        }
        Certificate::ExceptionalForm(form) => {
            ensure(form.n == n && form.elements.len() == 2, || "form answers a different question".into())?;
            ensure(form.elements.iter().all(|x| is_member(set, x)), || "form elements are not in the set".into())?;
            let (_, odd) = shape(n);
            ensure(form.odd_prime == form.j.map(|j| odd.get(j).map_or(0, |p| p.0)), || "odd prime does not match j".into())?;
            let [s1, s2] = template(n, form.case_tag, form.j)?;
            ensure(s1.instantiate(&form.alpha1) == form.elements[0] && s2.instantiate(&form.alpha2) == form.elements[1], || {
                "parameters do not reproduce the elements".into()
            })
        }
        Certificate::HyperplaneCover(data) => check_cover_data(set, n, data, true, opts),
        Certificate::UncoveredPoint(data) => check_cover_data(set, n, data, false, opts),
        Certificate::OddSubsetWitness(w) => {
            ensure(n == 2, || "odd-subset witnesses certify squares only".into())?;
            let mut idx = w.indices.clone();
            idx.sort_unstable();
            idx.dedup();
            ensure(idx.len() == w.indices.len() && idx.len() % 2 == 1, || "indices must be distinct and odd in number".into())?;
            ensure(idx.iter().all(|&i| i < set.len()), || "index out of range".into())?;
            let product = idx.iter().fold(FactoredRational::one(), |acc, &i| acc.mul(&set[i]));
            ensure(w.root.pow(2) == product, || format!("{} squared is not {product}", w.root))
        }
        Certificate::OracleExhausted { modulus, elements, .. } => {
            ensure(*modulus == n && elements.as_slice() == set, || "oracle ran on a different question".into())?;
            let (q, m) = odd_prime_power(n)?;
            let rerun = skalba_oracle(set, q, m, opts)?;
            ensure(rerun.holds(), || "oracle rerun does not hold".into())
        }
        Certificate::SkalbaWitness(w) => {
            ensure(w.modulus == n && w.elements.as_slice() == set, || "witness is for a different question".into())?;
            ensure(power_exponent(w.q, n).is_some(), || "witness prime does not match the exponent".into())?;
            ensure(witness_is_valid(w), || "a subset pair rescues the witness tuple".into())
        }
        Certificate::ComponentFailure { q, m, component } => {
            let k = q.checked_pow(*m).ok_or_else(|| VerifyError::Rejected("component overflows".into()))?;
            ensure(arith::is_prime_u64(*q) && n.is_multiple_of(k) && !(n / k).is_multiple_of(*q), || format!("{q}^{m} is not an exact part of {n}"))?;
            ensure(component.fails(), || "component does not fail".into())?;
            check_certificate(set, k, component.status, &component.certificate, opts)
        }
        Certificate::Lifted { e, base_n, base_elements, base } => {
            ensure(e * base_n == n && *e > 1, || "lift exponents do not multiply to n".into())?;
            ensure(!base_elements.is_empty(), || "empty base".into())?;
            for y in base_elements {
                let c = reduce_class(&y.pow(*e as i64), n);
                ensure(set.iter().any(|x| reduce_class(x, n) == c), || format!("{y}^{e} is not a class of the set"))?;
            }
            ensure(base.holds(), || "base does not hold".into())?;
            check_certificate(base_elements, *base_n, base.status, &base.certificate, opts)
        }
        Certificate::SingletonCriterion { n: k } => {
            ensure(*k == n, || "criterion is for a different exponent".into())?;
            let classes = classes_of(set, n);
            ensure(classes.len() == 1, || "more than one class".into())?;
            let a = &classes[0];
            ensure(!a.is_perfect_power(n), || format!("{a} is a perfect power"))?;
            let wang = n.is_multiple_of(8) && a.div(&FactoredRational::prime_power(2, (n / 2) as i64)).is_perfect_power(n);
            ensure(!wang, || format!("{a} has the Wang form"))
        }
        Certificate::PairCriterion { n: k } => {
            ensure(*k == n && n.is_multiple_of(2), || "pair criterion needs even n".into())?;
            let classes = classes_of(set, n);
            ensure(classes.len() == 2, || "not exactly two classes".into())?;
            ensure(classes.iter().all(|a| !a.is_perfect_power(n)), || "a class is trivial".into())?;
            ensure(match_exceptional_pair(&classes, n)?.is_none(), || "an exceptional template matches".into())
        }
        Certificate::CardinalityBound { n: k, smallest_prime, size } => {
            let (a0, odd) = shape(n);
            ensure(*k == n && a0 == 0, || "cardinality bound needs odd n".into())?;
            ensure(odd.first().map(|p| p.0) == Some(*smallest_prime), || "wrong smallest prime".into())?;
            let classes = classes_of(set, n);
            ensure(classes.len() == *size && *size as u64 <= *smallest_prime, || "too many classes".into())?;
            ensure(classes.iter().all(|a| !a.is_perfect_power(n)), || "a class is trivial".into())
        }
        Certificate::Sampled { .. } => Ok(()),
        Certificate::Evidence(report) => {
            ensure(report.params.k == n && report.params.elements.as_slice() == set, || "evidence is for a different question".into())
        }
    }
}

fn odd_prime_power(n: u64) -> Result<(u64, u32), VerifyError> {
    let (a0, odd) = shape(n);
    match odd.as_slice() {
        [(q, m)] if a0 == 0 => Ok((*q, *m)),
        _ => Err(VerifyError::Rejected(format!("{n} is not an odd prime power"))),
    }
}

/// Scans `[3, hi]` and rejects a `Holds` verdict that meets a failing prime
/// outside its excluded set, or a counterexample that is not one.
pub fn consistency_check(set: &[FactoredRational], n: u64, verdict: &Verdict, hi: u64) -> Check {
    if let Some(p) = verdict.counterexample {
        if set_has_kth_power_mod_p(set, n, p)? {
            return Err(VerifyError::Inconsistent(format!("counterexample {p} is not a failing prime")));
        }
    }
    if verdict.holds() && hi >= 3 {
        let report = scan(set, n, 3, hi, &verdict.excluded_primes)?;
        if let Some(p) = report.failing_primes.first() {
            return Err(VerifyError::Inconsistent(format!("holds, yet no {n}-th power residue mod {p}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::decide;

    fn set(xs: &[&str]) -> Vec<FactoredRational> {
        xs.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn engine_verdicts_verify() {
        let opts = DecideOptions { evidence: true, ..Default::default() };
        let cases: &[(&[&str], u64)] = &[
            (&["2", "3", "6", "18"], 3),
            (&["2", "3", "12"], 3),
            (&["16"], 8),
            (&["-27", "4"], 6),
            (&["-4", "9"], 4),
            (&["4", "8"], 6),
            (&["2", "4", "8"], 9),
            (&["8", "125", "1000", "125000"], 9),
            (&["4", "9", "36", "324"], 6),
            (&["3", "5", "15"], 2),
            (&["2", "3"], 2),
            (&["2", "3", "5"], 4),
            (&["1/8", "5"], 3),
            (&["2"], 5),
        ];
        for &(xs, n) in cases {
            let s = set(xs);
            let v = decide(&s, n, &opts).unwrap();
            verify(&s, n, &v).unwrap_or_else(|e| panic!("{xs:?} n={n}: {e}"));
            consistency_check(&s, n, &v, 2000).unwrap();
        }
    }

    #[test]
    fn tampering_is_caught() {
        let opts = DecideOptions::default();
        let s = set(&["2", "3", "6", "18"]);
        let mut v = decide(&s, 3, &opts).unwrap();
        assert!(verify(&set(&["2", "3", "12"]), 3, &v).is_err());
        v.status = Status::Fails;
        assert!(verify(&s, 3, &v).is_err());

        let s = set(&["2", "3", "12"]);
        let mut v = crate::covering::decide_q(&s, 3, &opts).unwrap();
        verify(&s, 3, &v).unwrap();
        if let Certificate::UncoveredPoint(d) = &mut v.certificate {
            d.point = Some(vec![1, 1]);
        }
        assert!(verify(&s, 3, &v).is_err());

        let s = set(&["3", "5", "15"]);
        let mut v = decide(&s, 2, &opts).unwrap();
        v.excluded_primes.remove(&5);
        assert!(verify(&s, 2, &v).is_err());
    }

    #[test]
    fn false_holds_trips_the_sieve() {
        let s = set(&["2", "3"]);
        let v = Verdict::new(Status::Holds, Certificate::PairCriterion { n: 2 }, &s, 2);
        assert!(matches!(consistency_check(&s, 2, &v, 100), Err(VerifyError::Inconsistent(_))));
    }
}
