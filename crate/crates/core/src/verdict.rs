//! Three-valued verdicts and the certificates that back them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::classifier::ExceptionalForm;
use crate::prime_power::SkalbaWitness;
use crate::rational::{prime_factors_u64, FactoredRational};
use crate::sieve::SieveReport;
use crate::square::OddSubsetWitness;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

/// One element's contribution to a covering certificate: `source` is the
/// element of the decided set, `base` the element whose exponents give the
/// linear form, and `layers` the number of `q`-th root layers stripped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRow {
    pub source: FactoredRational,
    pub base: FactoredRational,
    pub layers: u32,
}

/// Linear forms over `Z/modulus` read off the rows. A support entry of `-1`
/// is the sign coordinate (only used for squares).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverData {
    pub modulus: u64,
    #[serde(with = "crate::wide")]
    pub support: Vec<i128>,
    pub coeffs: Vec<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub point: Option<Vec<u64>>,
    pub rows: Vec<CoverRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `element = root^exponent`.
    PerfectPowerMember { element: FactoredRational, root: FactoredRational, exponent: u64 },
    /// `element = 2^(n/2) * b^n` with `8 | n`.
    WangException { element: FactoredRational, b: FactoredRational, n: u64 },
    ExceptionalForm(ExceptionalForm),
    HyperplaneCover(CoverData),
    UncoveredPoint(CoverData),
    OddSubsetWitness(OddSubsetWitness),
    /// The subset-pair oracle found a pair for every exponent tuple.
    OracleExhausted { modulus: u64, elements: Vec<FactoredRational>, tuples_checked: u64 },
    SkalbaWitness(SkalbaWitness),
    /// The set fails for the prime-power exponent `q^m` dividing `n`.
    ComponentFailure { q: u64, m: u32, component: Box<Verdict> },
    /// Every element is an `e`-th power and the `e`-th roots hold for `n / e`.
    Lifted {
        e: u64,
        base_n: u64,
        base_elements: Vec<FactoredRational>,
        base: Box<Verdict>,
    },
    /// A single class that is neither a perfect `n`-th power nor of the form `2^(n/2) b^n`.
    SingletonCriterion { n: u64 },
    /// Two classes, no perfect `n`-th power, and no exceptional template fits.
    PairCriterion { n: u64 },
    /// Odd `n`, at most `smallest_prime` classes, none a perfect `n`-th power.
    CardinalityBound { n: u64, smallest_prime: u64, size: usize },
    /// Random points of an oversized covering instance were all covered.
    Sampled {
        modulus: u64,
        #[serde(with = "crate::wide")]
        support: Vec<i128>,
        samples: u64,
        seed: u64,
    },
    Evidence(SieveReport),
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::PerfectPowerMember { .. } => "perfect_power_member",
            Certificate::WangException { .. } => "wang_exception",
            Certificate::ExceptionalForm(_) => "exceptional_form",
            Certificate::HyperplaneCover(_) => "hyperplane_cover",
            Certificate::UncoveredPoint(_) => "uncovered_point",
            Certificate::OddSubsetWitness(_) => "odd_subset_witness",
            Certificate::OracleExhausted { .. } => "oracle_exhausted",
            Certificate::SkalbaWitness(_) => "skalba_witness",
            Certificate::ComponentFailure { .. } => "component_failure",
            Certificate::Lifted { .. } => "lifted",
            Certificate::SingletonCriterion { .. } => "singleton_criterion",
            Certificate::PairCriterion { .. } => "pair_criterion",
            Certificate::CardinalityBound { .. } => "cardinality_bound",
            Certificate::Sampled { .. } => "sampled",
            Certificate::Evidence(_) => "evidence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub certificate: Certificate,
    /// Primes the claim says nothing about; always contains 2, the primes of
    /// the exponent, and every support prime.
    #[serde(with = "crate::wide")]
    pub excluded_primes: BTreeSet<u128>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<u64>,
}

impl Verdict {
    pub fn new(status: Status, certificate: Certificate, set: &[FactoredRational], n: u64) -> Self {
        Verdict { status, certificate, excluded_primes: exclusions(set, n), counterexample: None }
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn fails(&self) -> bool {
        self.status == Status::Fails
    }
}

/// `{2} ∪ primes(n) ∪ supports`.
pub fn exclusions(set: &[FactoredRational], n: u64) -> BTreeSet<u128> {
    let mut out = BTreeSet::from([2u128]);
    out.extend(prime_factors_u64(n).into_iter().map(|(p, _)| p as u128));
    out.extend(set.iter().flat_map(|x| x.support()));
    out
}

/// A verdict together with the question it answers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub n: u64,
    pub elements: Vec<FactoredRational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarlo {
    pub samples: u64,
    pub seed: u64,
}

/// Knobs shared by every decision routine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecideOptions {
    /// Largest point count a covering enumeration may visit.
    pub enumeration_ceiling: u64,
    pub oracle_max_len: usize,
    pub oracle_max_modulus: u64,
    /// Attach a counterexample prime to failing verdicts.
    pub evidence: bool,
    /// Prime bound for counterexample searches and inconclusive evidence scans.
    pub evidence_bound: u64,
    /// Sample oversized covering instances instead of refusing them.
    pub monte_carlo: Option<MonteCarlo>,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            enumeration_ceiling: 1 << 24,
            oracle_max_len: 8,
            oracle_max_modulus: 27,
            evidence: false,
            evidence_bound: 10_000,
            monte_carlo: None,
        }
    }
}
