//! The general decision pipeline, the singleton criterion, and the
//! exceptional two-element templates for even exponents.

use serde::{Deserialize, Serialize};

use crate::arith::gcd_u64;
use crate::error::{Error, Result};
use crate::prime_power::decide_prime_power;
use crate::rational::{clear_denominators, dedup_by_class, prime_factors_u64, FactoredRational};
use crate::sieve::{find_counterexample, scan};
use crate::square::decide_two_power;
use crate::verdict::{Certificate, DecideOptions, Decision, Status, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "wang8")]
    Wang8,
    #[serde(rename = "a0eq1")]
    A0eq1,
    #[serde(rename = "a0eq2_neg2")]
    A0eq2Neg2,
    #[serde(rename = "a0eq2_pj")]
    A0eq2Pj,
    #[serde(rename = "a0eq2_pj_neg2")]
    A0eq2PjNeg2,
    #[serde(rename = "a0ge3_2half")]
    A0ge3TwoHalf,
    #[serde(rename = "a0ge3_pj")]
    A0ge3Pj,
    #[serde(rename = "a0ge3_pj_2")]
    A0ge3Pj2,
    #[serde(rename = "a0ge3_2pj")]
    A0ge3TwoPj,
    #[serde(rename = "a0ge3_2pj_2")]
    A0ge3TwoPj2,
}

impl CaseTag {
    /// Matching order.
    pub const ALL: [CaseTag; 10] = [
        CaseTag::Wang8,
        CaseTag::A0eq1,
        CaseTag::A0eq2Neg2,
        CaseTag::A0eq2Pj,
        CaseTag::A0eq2PjNeg2,
        CaseTag::A0ge3TwoHalf,
        CaseTag::A0ge3Pj,
        CaseTag::A0ge3Pj2,
        CaseTag::A0ge3TwoPj,
        CaseTag::A0ge3TwoPj2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::Wang8 => "wang8",
            CaseTag::A0eq1 => "a0eq1",
            CaseTag::A0eq2Neg2 => "a0eq2_neg2",
            CaseTag::A0eq2Pj => "a0eq2_pj",
            CaseTag::A0eq2PjNeg2 => "a0eq2_pj_neg2",
            CaseTag::A0ge3TwoHalf => "a0ge3_2half",
            CaseTag::A0ge3Pj => "a0ge3_pj",
            CaseTag::A0ge3Pj2 => "a0ge3_pj_2",
            CaseTag::A0ge3TwoPj => "a0ge3_2pj",
            CaseTag::A0ge3TwoPj2 => "a0ge3_2pj_2",
        }
    }

    /// Whether the template is indexed by an odd prime of `n`.
    pub fn uses_odd_prime(self) -> bool {
        !matches!(self, CaseTag::Wang8 | CaseTag::A0eq2Neg2 | CaseTag::A0ge3TwoHalf)
    }
}

impl std::str::FromStr for CaseTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown case tag `{s}`")))
    }
}

/// `c · α^k`: an element matches when dividing by `c` leaves a perfect
/// `k`-th power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub c: FactoredRational,
    pub k: u64,
}

impl Slot {
    fn new(c: FactoredRational, k: u64) -> Self {
        Slot { c, k }
    }

    pub fn recover(&self, x: &FactoredRational) -> Option<FactoredRational> {
        x.div(&self.c).exact_root(self.k)
    }

    pub fn instantiate(&self, alpha: &FactoredRational) -> FactoredRational {
        self.c.mul(&alpha.pow(self.k as i64))
    }
}

/// A two-element set recognized as an instance of a template. `elements`
/// are listed in slot order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalForm {
    pub n: u64,
    pub case_tag: CaseTag,
    /// 0-based index of the odd prime among the odd prime divisors of `n`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub odd_prime: Option<u64>,
    pub alpha1: FactoredRational,
    pub alpha2: FactoredRational,
    pub elements: Vec<FactoredRational>,
}

/// `(2-adic valuation, odd prime powers)` of `n`.
pub fn shape(n: u64) -> (u32, Vec<(u64, u32)>) {
    let factors = prime_factors_u64(n);
    let a0 = factors.iter().find(|(p, _)| *p == 2).map_or(0, |&(_, e)| e);
    (a0, factors.into_iter().filter(|(p, _)| *p != 2).collect())
}

fn two_pow(e: u64) -> FactoredRational {
    FactoredRational::prime_power(2, e as i64)
}

/// The two slots of a template. `j` selects the odd prime for the templates
/// that need one and is ignored otherwise.
pub fn template(n: u64, tag: CaseTag, j: Option<usize>) -> Result<[Slot; 2]> {
    let inapplicable = |why: String| Error::InapplicableCase(tag.name().to_string(), why);
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::NotEven(n));
    }
    let (a0, odd) = shape(n);
    let wanted = match tag {
        CaseTag::Wang8 => return Err(inapplicable("the Wang case concerns single elements".into())),
        CaseTag::A0eq1 => a0 == 1,
        CaseTag::A0eq2Neg2 | CaseTag::A0eq2Pj | CaseTag::A0eq2PjNeg2 => a0 == 2,
        _ => a0 >= 3,
    };
    if !wanted {
        return Err(inapplicable(format!("2-adic valuation of {n} is {a0}")));
    }
    let half = n / 2;
    let pj = if tag.uses_odd_prime() {
        let j = j.ok_or_else(|| inapplicable("an odd prime index is required".into()))?;
        let &(p, a) = odd.get(j).ok_or_else(|| inapplicable(format!("{n} has no odd prime with index {j}")))?;
        Some((p, p.pow(a)))
    } else {
        None
    };
    let one = FactoredRational::one();
    let slots = match (tag, pj) {
        (CaseTag::A0eq1, Some((p, pa))) => {
            // n / 2 is odd here, so the sign survives the power
            let negative = p % 4 == 3;
            let c = FactoredRational::from_prime_powers(negative, [(p as u128, half as i64)]);
            [Slot::new(c, n), Slot::new(one, n / pa)]
        }
        (CaseTag::A0eq2Neg2, _) => [Slot::new(two_pow(half).mul(&FactoredRational::minus_one()), n), Slot::new(one, half)],
        (CaseTag::A0eq2Pj, Some((p, pa))) | (CaseTag::A0ge3Pj, Some((p, pa))) => {
            [Slot::new(FactoredRational::prime_power(p as u128, half as i64), n), Slot::new(one, n / pa)]
        }
        (CaseTag::A0eq2PjNeg2, Some((p, pa))) => [
            Slot::new(FactoredRational::prime_power(p as u128, half as i64), n),
            Slot::new(two_pow(n / (2 * pa)).mul(&FactoredRational::minus_one()), n / pa),
        ],
        (CaseTag::A0ge3TwoHalf, _) => [Slot::new(two_pow(half), n), Slot::new(one, 1)],
        (CaseTag::A0ge3Pj2, Some((p, pa))) => [
            Slot::new(FactoredRational::prime_power(p as u128, half as i64), n),
            Slot::new(two_pow(n / (2 * pa)), n / pa),
        ],
        (CaseTag::A0ge3TwoPj, Some((p, pa))) => {
            let c = FactoredRational::from_prime_powers(false, [(2, half as i64), (p as u128, half as i64)]);
            [Slot::new(c, n), Slot::new(one, n / pa)]
        }
        (CaseTag::A0ge3TwoPj2, Some((p, pa))) => {
            let c = FactoredRational::from_prime_powers(false, [(2, half as i64), (p as u128, half as i64)]);
            [Slot::new(c, n), Slot::new(two_pow(n / (2 * pa)), n / pa)]
        }
        _ => unreachable!("odd prime resolved above"),
    };
    Ok(slots)
}

/// Every `(tag, j)` instantiable for `n`, in matching order.
pub fn applicable_cases(n: u64) -> Vec<(CaseTag, Option<usize>)> {
    if !n.is_multiple_of(2) {
        return Vec::new();
    }
    let (_, odd) = shape(n);
    let mut out = Vec::new();
    for tag in CaseTag::ALL {
        let js: Vec<Option<usize>> =
            if tag.uses_odd_prime() { (0..odd.len()).map(Some).collect() } else { vec![None] };
        for j in js {
            if template(n, tag, j).is_ok() {
                out.push((tag, j));
            }
        }
    }
    out
}

fn check_pair(set: &[FactoredRational], n: u64) -> Result<()> {
    if !n.is_multiple_of(2) || n == 0 {
        return Err(Error::NotEven(n));
    }
    if set.len() != 2 {
        return Err(Error::WrongCardinality { expected: 2, got: set.len() });
    }
    Ok(())
}

/// All template matches, in matching order.
pub fn match_all_exceptional(set: &[FactoredRational], n: u64) -> Result<Vec<ExceptionalForm>> {
    check_pair(set, n)?;
    let (_, odd) = shape(n);
    let mut out = Vec::new();
    for (tag, j) in applicable_cases(n) {
        let slots = template(n, tag, j)?;
        for (x, y) in [(&set[0], &set[1]), (&set[1], &set[0])] {
            if let (Some(alpha1), Some(alpha2)) = (slots[0].recover(x), slots[1].recover(y)) {
                out.push(ExceptionalForm {
                    n,
                    case_tag: tag,
                    j,
                    odd_prime: j.map(|j| odd[j].0),
                    alpha1,
                    alpha2,
                    elements: vec![x.clone(), y.clone()],
                });
            }
        }
    }
    Ok(out)
}

/// The first template match, if any.
pub fn match_exceptional_pair(set: &[FactoredRational], n: u64) -> Result<Option<ExceptionalForm>> {
    Ok(match_all_exceptional(set, n)?.into_iter().next())
}

fn with_evidence(mut v: Verdict, set: &[FactoredRational], n: u64, opts: &DecideOptions) -> Verdict {
    if v.status == Status::Fails && opts.evidence && v.counterexample.is_none() {
        v.counterexample = find_counterexample(set, n, opts.evidence_bound);
    }
    v
}

/// A single element: a perfect `n`-th power, the Wang form `2^(n/2) b^n`
/// when `8 | n`, or a failure.
pub fn classify_singleton(a: &FactoredRational, n: u64, opts: &DecideOptions) -> Result<Verdict> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("exponent {n} is below 2")));
    }
    let set = std::slice::from_ref(a);
    if let Some(root) = a.exact_root(n) {
        let cert = Certificate::PerfectPowerMember { element: a.clone(), root, exponent: n };
        return Ok(Verdict::new(Status::Holds, cert, set, n));
    }
    if n.is_multiple_of(8) {
        if let Some(b) = a.div(&two_pow(n / 2)).exact_root(n) {
            let cert = Certificate::WangException { element: a.clone(), b, n };
            return Ok(Verdict::new(Status::Holds, cert, set, n));
        }
    }
    let v = Verdict::new(Status::Fails, Certificate::SingletonCriterion { n }, set, n);
    Ok(with_evidence(v, set, n, opts))
}

fn divisors_desc(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    out.reverse();
    out
}

/// Holds via `x = y^e` for every class and `{y}` holding for `n / e`.
fn try_lift(classes: &[FactoredRational], n: u64, opts: &DecideOptions) -> Result<Option<Certificate>> {
    let g = classes
        .iter()
        .flat_map(|x| x.factors().iter().map(|&(_, e)| e.unsigned_abs()))
        .fold(0, gcd_u64);
    for e in divisors_desc(gcd_u64(g, n)) {
        if e <= 1 || e >= n {
            continue;
        }
        let Some(bases) = classes.iter().map(|x| x.exact_root(e)).collect::<Option<Vec<_>>>() else {
            continue;
        };
        let base = decide(&bases, n / e, opts)?;
        if base.holds() {
            return Ok(Some(Certificate::Lifted { e, base_n: n / e, base_elements: bases, base: Box::new(base) }));
        }
    }
    Ok(None)
}

/// Decides whether `set` contains an `n`-th power in `Q_p` for almost every
/// prime `p`.
pub fn decide(set: &[FactoredRational], n: u64, opts: &DecideOptions) -> Result<Verdict> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("exponent {n} is below 2")));
    }
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let cleared = clear_denominators(set, n);
    let classes = dedup_by_class(&cleared, n);

    if let Some(&(i, _)) = classes.iter().find(|(_, c)| c.is_trivial()) {
        let root = set[i].exact_root(n).expect("trivial class");
        let cert = Certificate::PerfectPowerMember { element: set[i].clone(), root, exponent: n };
        return Ok(Verdict::new(Status::Holds, cert, set, n));
    }
    let fail = |cert: Certificate| with_evidence(Verdict::new(Status::Fails, cert, set, n), set, n, opts);

    if classes.len() == 1 {
        let mut v = classify_singleton(&set[classes[0].0], n, opts)?;
        v.excluded_primes = crate::verdict::exclusions(set, n);
        return Ok(with_evidence(v, set, n, opts));
    }
    let (a0, odd) = shape(n);
    if a0 > 0 && classes.len() == 2 {
        let pair = [set[classes[0].0].clone(), set[classes[1].0].clone()];
        return Ok(match match_exceptional_pair(&pair, n)? {
            Some(form) => Verdict::new(Status::Holds, Certificate::ExceptionalForm(form), set, n),
            None => fail(Certificate::PairCriterion { n }),
        });
    }
    if a0 == 0 {
        let p1 = odd[0].0;
        if classes.len() as u64 <= p1 {
            return Ok(fail(Certificate::CardinalityBound { n, smallest_prime: p1, size: classes.len() }));
        }
    }

    let reps: Vec<FactoredRational> = classes.iter().map(|&(i, _)| cleared[i].clone()).collect();
    let mut components = Vec::new();
    let mut parts: Vec<(u64, u32)> = Vec::new();
    if a0 > 0 {
        parts.push((2, a0));
    }
    parts.extend(odd.iter().copied());
    for (q, m) in parts {
        let v = if q == 2 { decide_two_power(&reps, m, opts)? } else { decide_prime_power(&reps, q, m, opts)? };
        if v.fails() {
            return Ok(fail(Certificate::ComponentFailure { q, m, component: Box::new(v) }));
        }
        components.push(v);
    }
    if components.len() == 1 && components[0].holds() {
        let mut v = components.pop().unwrap();
        v.excluded_primes = crate::verdict::exclusions(set, n);
        return Ok(v);
    }
    if let Some(cert) = try_lift(&reps, n, opts)? {
        return Ok(Verdict::new(Status::Holds, cert, set, n));
    }
    let report = scan(set, n, 3, opts.evidence_bound.max(3), &Default::default())?;
    Ok(Verdict::new(Status::Inconclusive, Certificate::Evidence(report), set, n))
}

/// [`decide`] bundled with its inputs, as reported to users.
pub fn decide_report(set: &[FactoredRational], n: u64, opts: &DecideOptions) -> Result<Decision> {
    Ok(Decision { verdict: decide(set, n, opts)?, n, elements: set.to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[&str]) -> Vec<FactoredRational> {
        xs.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn r(s: &str) -> FactoredRational {
        s.parse().unwrap()
    }

    #[test]
    fn singleton_examples() {
        let opts = DecideOptions { evidence: true, ..Default::default() };
        let v = classify_singleton(&r("16"), 8, &opts).unwrap();
        assert_eq!(v.certificate, Certificate::WangException { element: r("16"), b: r("1"), n: 8 });
        let v = classify_singleton(&r("-243/32"), 5, &opts).unwrap();
        assert_eq!(v.certificate.kind(), "perfect_power_member");
        let v = classify_singleton(&r("2"), 3, &opts).unwrap();
        assert_eq!((v.status, v.counterexample), (Status::Fails, Some(7)));
        assert_eq!(classify_singleton(&r("-16"), 8, &opts).unwrap().status, Status::Fails);
    }

    #[test]
    fn pair_examples() {
        let f = match_exceptional_pair(&set(&["-27", "4"]), 6).unwrap().unwrap();
        assert_eq!((f.case_tag, f.odd_prime), (CaseTag::A0eq1, Some(3)));
        assert_eq!((f.alpha1.clone(), f.alpha2.clone()), (r("1"), r("2")));
        let f = match_exceptional_pair(&set(&["9", "-4"]), 4).unwrap().unwrap();
        assert_eq!(f.case_tag, CaseTag::A0eq2Neg2);
        assert_eq!((f.alpha1.clone(), f.alpha2.clone()), (r("1"), r("3")));
        assert_eq!(f.elements, set(&["-4", "9"]));
        assert_eq!(match_exceptional_pair(&set(&["2", "3"]), 6).unwrap(), None);
        assert_eq!(match_exceptional_pair(&set(&["2", "3"]), 3), Err(Error::NotEven(3)));
        assert_eq!(
            match_exceptional_pair(&set(&["2"]), 6),
            Err(Error::WrongCardinality { expected: 2, got: 1 })
        );
    }

    #[test]
    fn templates_by_shape() {
        assert!(applicable_cases(2).is_empty());
        let tags: Vec<CaseTag> = applicable_cases(12).into_iter().map(|(t, _)| t).collect();
        assert_eq!(tags, vec![CaseTag::A0eq2Neg2, CaseTag::A0eq2Pj, CaseTag::A0eq2PjNeg2]);
        assert_eq!(applicable_cases(24).len(), 5);
        assert!(matches!(template(8, CaseTag::A0eq1, Some(0)), Err(Error::InapplicableCase(..))));
        assert!(matches!(template(8, CaseTag::A0ge3Pj, Some(0)), Err(Error::InapplicableCase(..))));
        // 5 = 1 (mod 4) keeps the positive sign
        let [s, _] = template(10, CaseTag::A0eq1, Some(0)).unwrap();
        assert_eq!(s.c, r("3125"));
    }

    #[test]
    fn decide_examples() {
        let opts = DecideOptions { evidence: true, ..Default::default() };
        let v = decide(&set(&["2", "3", "6", "18"]), 3, &opts).unwrap();
        assert_eq!(v.certificate.kind(), "hyperplane_cover");
        let v = decide(&set(&["4", "8"]), 6, &opts).unwrap();
        assert_eq!((v.status, v.counterexample), (Status::Fails, Some(13)));
        let v = decide(&set(&["4", "9", "36", "324"]), 6, &opts).unwrap();
        assert_eq!(v.certificate.kind(), "lifted");
        let v = decide(&set(&["2", "3", "12"]), 3, &opts).unwrap();
        assert_eq!((v.status, v.counterexample), (Status::Fails, Some(7)));
        let v = decide(&set(&["2", "4", "8"]), 9, &opts).unwrap();
        assert_eq!((v.status, v.counterexample), (Status::Fails, Some(19)));
    }

    #[test]
    fn classes_are_deduplicated_first() {
        let opts = DecideOptions::default();
        // 2 and 2 * 3^3 share a cube class, leaving one class
        let v = decide(&set(&["2", "54"]), 3, &opts).unwrap();
        assert_eq!(v.certificate, Certificate::SingletonCriterion { n: 3 });
        let v = decide(&set(&["1/8", "5"]), 3, &opts).unwrap();
        assert_eq!(v.certificate.kind(), "perfect_power_member");
    }

    #[test]
    fn composite_without_structure_is_inconclusive() {
        let opts = DecideOptions::default();
        // both components hold, and the classes share no common power
        let v = decide(&set(&["2", "3", "6", "18", "5"]), 6, &opts).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert_eq!(v.certificate.kind(), "evidence");
    }
}
