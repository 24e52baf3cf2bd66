//! Constructors for the standard witness families.

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::classifier::{template, CaseTag};
use crate::error::{Error, Result};
use crate::rational::{dedup_by_class, prime_factors_u64, FactoredRational};

/// A family request, as accepted by the command line and the demo page.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    CubicQuad { a: i64, b: i64 },
    SquareTriple { p1: u64, p2: u64 },
    Lifted { elements: Vec<FactoredRational>, e: u64 },
    OddOptimal { q1: u64, q2: u64, n: u64 },
    EvenOptimal { q1: u64, q2: u64, n: u64 },
    ExceptionalPair {
        n: u64,
        case_tag: CaseTag,
        #[serde(default)]
        j: Option<usize>,
        alpha1: FactoredRational,
        alpha2: FactoredRational,
    },
}

impl FamilySpec {
    pub fn generate(&self) -> Result<Vec<FactoredRational>> {
        match self {
            FamilySpec::CubicQuad { a, b } => cubic_quad(*a, *b),
            FamilySpec::SquareTriple { p1, p2 } => square_triple(*p1, *p2),
            FamilySpec::Lifted { elements, e } => Ok(lifted(elements, *e)),
            FamilySpec::OddOptimal { q1, q2, n } => odd_optimal(*q1, *q2, *n),
            FamilySpec::EvenOptimal { q1, q2, n } => even_optimal(*q1, *q2, *n),
            FamilySpec::ExceptionalPair { n, case_tag, j, alpha1, alpha2 } => {
                exceptional_pair(*n, *case_tag, *j, alpha1, alpha2)
            }
        }
    }
}

fn degenerate(why: impl Into<String>) -> Error {
    Error::DegenerateParameters(why.into())
}

fn int(x: i64) -> Result<FactoredRational> {
    FactoredRational::from_int(x as i128)
}

/// `{a, b, ab, ab^2}`.
pub fn cubic_quad(a: i64, b: i64) -> Result<Vec<FactoredRational>> {
    if a == 0 || b == 0 || a == b {
        return Err(degenerate(format!("need distinct nonzero integers, got {a} and {b}")));
    }
    let (fa, fb) = (int(a)?, int(b)?);
    let out = vec![fa.clone(), fb.clone(), fa.mul(&fb), fa.mul(&fb.pow(2))];
    let classes = dedup_by_class(&out, 3);
    if classes.len() < out.len() || classes.iter().any(|(_, c)| c.is_trivial()) {
        return Err(degenerate(format!("{a} and {b} give repeated or cube classes")));
    }
    Ok(out)
}

fn check_prime(p: u64, odd: bool) -> Result<()> {
    if !arith::is_prime_u64(p) || (odd && p == 2) {
        let what = if odd { "an odd prime" } else { "a prime" };
        return Err(degenerate(format!("{p} is not {what}")));
    }
    Ok(())
}

/// `{p1, p2, p1 p2}` for distinct odd primes.
pub fn square_triple(p1: u64, p2: u64) -> Result<Vec<FactoredRational>> {
    check_prime(p1, true)?;
    check_prime(p2, true)?;
    if p1 == p2 {
        return Err(degenerate(format!("primes must differ, got {p1} twice")));
    }
    let (a, b) = (int(p1 as i64)?, int(p2 as i64)?);
    Ok(vec![a.clone(), b.clone(), a.mul(&b)])
}

/// `{x^e : x ∈ set}`.
pub fn lifted(set: &[FactoredRational], e: u64) -> Vec<FactoredRational> {
    set.iter().map(|x| x.pow(e as i64)).collect()
}

/// `{q1, q2, q1 q2, q1 q2^2, …, q1 q2^(p-1)}` raised to `n / p`, where `p`
/// is the smallest prime of the odd exponent `n`.
pub fn odd_optimal(q1: u64, q2: u64, n: u64) -> Result<Vec<FactoredRational>> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(degenerate(format!("exponent {n} is not an odd number above 1")));
    }
    let p = prime_factors_u64(n)[0].0;
    check_prime(q1, false)?;
    check_prime(q2, false)?;
    if q1 == q2 || q1 == p || q2 == p {
        return Err(degenerate(format!("need distinct primes other than {p}, got {q1} and {q2}")));
    }
    let (a, b) = (int(q1 as i64)?, int(q2 as i64)?);
    let mut base = vec![a.clone(), b.clone()];
    base.extend((1..p as i64).map(|k| a.mul(&b.pow(k))));
    Ok(lifted(&base, n / p))
}

/// `{q1^(n/2), q2^(n/2), (q1 q2)^(n/2)}`.
pub fn even_optimal(q1: u64, q2: u64, n: u64) -> Result<Vec<FactoredRational>> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(degenerate(format!("exponent {n} is not even")));
    }
    Ok(lifted(&square_triple(q1, q2)?, n / 2))
}

/// The two-element set of a template, in slot order.
pub fn exceptional_pair(
    n: u64,
    tag: CaseTag,
    j: Option<usize>,
    alpha1: &FactoredRational,
    alpha2: &FactoredRational,
) -> Result<Vec<FactoredRational>> {
    if !n.is_multiple_of(2) {
        return Err(Error::InapplicableCase(tag.name().into(), format!("exponent {n} is odd")));
    }
    let [s1, s2] = template(n, tag, j)?;
    Ok(vec![s1.instantiate(alpha1), s2.instantiate(alpha2)])
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
    fn cubic_quad_examples() {
        assert_eq!(cubic_quad(2, 3).unwrap(), set(&["2", "3", "6", "18"]));
        assert_eq!(cubic_quad(5, 7).unwrap(), set(&["5", "7", "35", "245"]));
        assert!(matches!(cubic_quad(1, 2), Err(Error::DegenerateParameters(_))));
        assert!(matches!(cubic_quad(4, 4), Err(Error::DegenerateParameters(_))));
    }

    #[test]
    fn triples_and_lifts() {
        assert_eq!(square_triple(3, 5).unwrap(), set(&["3", "5", "15"]));
        assert!(square_triple(3, 3).is_err());
        assert!(square_triple(2, 3).is_err());
        assert_eq!(lifted(&set(&["2", "3", "6", "18"]), 2), set(&["4", "9", "36", "324"]));
        assert_eq!(lifted(&set(&["3", "5", "15"]), 3), set(&["27", "125", "3375"]));
        assert_eq!(lifted(&set(&["3", "5"]), 1), set(&["3", "5"]));
    }

    #[test]
    fn optimal_families() {
        assert_eq!(odd_optimal(2, 5, 3).unwrap(), set(&["2", "5", "10", "50"]));
        assert_eq!(odd_optimal(2, 5, 9).unwrap(), set(&["8", "125", "1000", "125000"]));
        assert_eq!(odd_optimal(2, 7, 15).unwrap().len(), 4);
        assert!(odd_optimal(2, 2, 3).is_err());
        assert!(odd_optimal(3, 5, 9).is_err());
        assert_eq!(even_optimal(3, 5, 6).unwrap(), set(&["27", "125", "3375"]));
        assert_eq!(even_optimal(3, 5, 2).unwrap(), set(&["3", "5", "15"]));
        assert_eq!(even_optimal(3, 5, 4).unwrap(), set(&["9", "25", "225"]));
    }

    #[test]
    fn exceptional_examples() {
        assert_eq!(exceptional_pair(6, CaseTag::A0eq1, Some(0), &r("1"), &r("2")).unwrap(), set(&["-27", "4"]));
        assert_eq!(exceptional_pair(4, CaseTag::A0eq2Neg2, None, &r("1"), &r("3")).unwrap(), set(&["-4", "9"]));
        let p = exceptional_pair(24, CaseTag::A0ge3TwoHalf, None, &r("1"), &r("5")).unwrap();
        assert_eq!(p, set(&["4096", "5"]));
        assert!(matches!(
            exceptional_pair(6, CaseTag::A0eq2Neg2, None, &r("1"), &r("1")),
            Err(Error::InapplicableCase(..))
        ));
        assert!(matches!(
            exceptional_pair(8, CaseTag::Wang8, None, &r("1"), &r("1")),
            Err(Error::InapplicableCase(..))
        ));
    }

    #[test]
    fn family_spec_round_trip() {
        let spec: FamilySpec = serde_json::from_str(r#"{"kind":"cubic_quad","a":2,"b":3}"#).unwrap();
        assert_eq!(spec.generate().unwrap(), set(&["2", "3", "6", "18"]));
        let spec: FamilySpec =
            serde_json::from_str(r#"{"kind":"exceptional_pair","n":6,"case_tag":"a0eq1","j":0,"alpha1":"1/1","alpha2":"2/1"}"#)
                .unwrap();
        assert_eq!(spec.generate().unwrap(), set(&["-27", "4"]));
    }
}
