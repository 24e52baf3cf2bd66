//! Hyperplane systems over `Z/m` and exhaustive covering checks.
//!
//! For an odd prime `q` and a set of `q`-free integers, each element's exponent
//! vector on the joint support is a linear form over `F_q^s`. The set contains
//! a `q`-th power locally at almost every prime exactly when the kernels of
//! these forms cover `F_q^s`. The same enumeration runs over `(Z/q^m)^s` for
//! prime-power exponents.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith;
use crate::error::{Error, Result};
use crate::rational::{dedup_by_class, joint_support, FactoredRational};
use crate::sieve::find_counterexample;
use crate::verdict::{Certificate, CoverData, CoverRow, DecideOptions, Status, Verdict};

/// Point spaces at most this large get a per-point witness map.
pub const WITNESS_MAP_LIMIT: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    pub modulus: u64,
    pub support: Vec<u128>,
    /// One column per element, entries in `[0, modulus)`.
    pub columns: Vec<Vec<u64>>,
}

impl ExponentMatrix {
    pub fn from_elements(set: &[FactoredRational], modulus: u64) -> Self {
        let support = joint_support(set);
        let m = modulus as i64;
        let columns = set
            .iter()
            .map(|x| x.exponent_vector(&support).into_iter().map(|e| e.rem_euclid(m) as u64).collect())
            .collect();
        ExponentMatrix { modulus, support, columns }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    coeffs: Vec<u64>,
}

impl Hyperplane {
    /// `None` for the zero form.
    pub fn new(coeffs: Vec<u64>) -> Option<Self> {
        coeffs.iter().any(|&c| c != 0).then_some(Hyperplane { coeffs })
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn eval(&self, point: &[u64], modulus: u64) -> u64 {
        self.coeffs
            .iter()
            .zip(point)
            .fold(0u64, |acc, (&c, &x)| ((acc as u128 + c as u128 * x as u128) % modulus as u128) as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverOutcome {
    /// `witnesses[i]` is the first hyperplane containing point `i` (in
    /// lexicographic order), present for small spaces only.
    Covered { witnesses: Option<Vec<usize>> },
    Uncovered { point: Vec<u64> },
}

/// Hyperplanes attached to a set of `q`-free integers. The flag reports a
/// zero exponent column, which cannot occur once units are rejected.
pub fn build_hyperplanes(
    set: &[FactoredRational],
    q: u64,
) -> Result<(ExponentMatrix, Vec<Hyperplane>, bool)> {
    check_odd_prime(q)?;
    for x in set {
        if x.is_unit() {
            return Err(Error::UnitElement);
        }
        if x.factors().iter().any(|&(_, e)| e < 0 || e >= q as i64) {
            return Err(Error::NotQFree(x.to_string()));
        }
    }
    let matrix = ExponentMatrix::from_elements(set, q);
    let trivial = matrix.columns.iter().any(|c| c.iter().all(|&e| e == 0));
    let planes = matrix.columns.iter().filter_map(|c| Hyperplane::new(c.clone())).collect();
    Ok((matrix, planes, trivial))
}

fn check_odd_prime(q: u64) -> Result<()> {
    if q < 3 || !arith::is_prime_u64(q) {
        return Err(Error::InvalidArgument(format!("{q} is not an odd prime")));
    }
    Ok(())
}

fn point_count(modulus: u64, s: usize) -> u128 {
    (0..s).try_fold(1u128, |acc, _| acc.checked_mul(modulus as u128)).unwrap_or(u128::MAX)
}

fn decode(mut index: u64, modulus: u64, s: usize) -> Vec<u64> {
    let mut point = vec![0; s];
    for slot in point.iter_mut().rev() {
        *slot = index % modulus;
        index /= modulus;
    }
    point
}

fn first_uncovered(planes: &[Hyperplane], modulus: u64, s: usize, lo: u64, hi: u64) -> Option<Vec<u64>> {
    let mut point = decode(lo, modulus, s);
    for _ in lo..hi {
        if planes.iter().all(|h| h.eval(&point, modulus) != 0) {
            return Some(point);
        }
        // odometer step, last coordinate fastest
        for slot in point.iter_mut().rev() {
            *slot += 1;
            if *slot < modulus {
                break;
            }
            *slot = 0;
        }
    }
    None
}

/// Decides whether the kernels of `planes` cover `(Z/modulus)^s`, returning
/// the lexicographically least uncovered point otherwise.
pub fn covers(planes: &[Hyperplane], modulus: u64, s: usize, ceiling: u64) -> Result<CoverOutcome> {
    if planes.is_empty() || s == 0 || modulus < 2 {
        return Err(Error::InvalidArgument("covering needs a nonempty system over a nontrivial space".into()));
    }
    if planes.iter().any(|h| h.coeffs.len() != s) {
        return Err(Error::InvalidArgument("hyperplane dimension mismatch".into()));
    }
    let total = point_count(modulus, s);
    if total > ceiling as u128 {
        return Err(Error::InstanceTooLarge { points: total, ceiling });
    }
    let total = total as u64;

    let mut distinct: Vec<Hyperplane> = Vec::new();
    for h in planes {
        if !distinct.contains(h) {
            distinct.push(h.clone());
        }
    }

    const CHUNK: u64 = 1 << 12;
    let chunks = total.div_ceil(CHUNK);
    let search = |c: u64| first_uncovered(&distinct, modulus, s, c * CHUNK, ((c + 1) * CHUNK).min(total));

    #[cfg(feature = "parallel")]
    let found = {
        use rayon::prelude::*;
        (0..chunks).into_par_iter().find_map_first(search)
    };
    #[cfg(not(feature = "parallel"))]
    let found = (0..chunks).find_map(search);

    if let Some(point) = found {
        assert!(planes.iter().all(|h| h.eval(&point, modulus) != 0), "uncovered point failed re-check");
        return Ok(CoverOutcome::Uncovered { point });
    }
    let witnesses = (total <= WITNESS_MAP_LIMIT).then(|| {
        (0..total)
            .map(|i| {
                let p = decode(i, modulus, s);
                planes.iter().position(|h| h.eval(&p, modulus) == 0).expect("covered point")
            })
            .collect()
    });
    Ok(CoverOutcome::Covered { witnesses })
}

/// Random search for an uncovered point; a hit is exact, a miss proves nothing.
pub fn covers_sampled(planes: &[Hyperplane], modulus: u64, s: usize, samples: u64, seed: u64) -> Option<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).find_map(|_| {
        let point: Vec<u64> = (0..s).map(|_| rng.gen_range(0..modulus)).collect();
        planes.iter().all(|h| h.eval(&point, modulus) != 0).then_some(point)
    })
}

/// Runs the covering check on `rows` over `Z/modulus`.
pub(crate) fn cover_decision(
    rows: Vec<CoverRow>,
    modulus: u64,
    opts: &DecideOptions,
) -> Result<(Status, Certificate)> {
    let bases: Vec<FactoredRational> = rows.iter().map(|r| r.base.clone()).collect();
    let matrix = ExponentMatrix::from_elements(&bases, modulus);
    let s = matrix.support.len();
    let planes: Vec<Hyperplane> = matrix
        .columns
        .iter()
        .map(|c| Hyperplane::new(c.clone()).expect("trivial classes are filtered by the caller"))
        .collect();
    let mut data = CoverData {
        modulus,
        support: matrix.support.iter().map(|&p| p as i128).collect(),
        coeffs: matrix.columns.clone(),
        point: None,
        rows,
    };
    match covers(&planes, modulus, s, opts.enumeration_ceiling) {
        Ok(CoverOutcome::Covered { .. }) => Ok((Status::Holds, Certificate::HyperplaneCover(data))),
        Ok(CoverOutcome::Uncovered { point }) => {
            data.point = Some(point);
            Ok((Status::Fails, Certificate::UncoveredPoint(data)))
        }
        Err(Error::InstanceTooLarge { .. }) if opts.monte_carlo.is_some() => {
            let mc = opts.monte_carlo.unwrap();
            match covers_sampled(&planes, modulus, s, mc.samples, mc.seed) {
                Some(point) => {
                    data.point = Some(point);
                    Ok((Status::Fails, Certificate::UncoveredPoint(data)))
                }
                None => Ok((
                    Status::Inconclusive,
                    Certificate::Sampled { modulus, support: data.support, samples: mc.samples, seed: mc.seed },
                )),
            }
        }
        Err(e) => Err(e),
    }
}

/// Decides whether `set` contains a `q`-th power in `Q_p` for almost every
/// prime `p`, for an odd prime `q`.
pub fn decide_q(set: &[FactoredRational], q: u64, opts: &DecideOptions) -> Result<Verdict> {
    check_odd_prime(q)?;
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let classes = dedup_by_class(set, q);
    if let Some((i, _)) = classes.iter().find(|(_, c)| c.is_trivial()) {
        let element = set[*i].clone();
        let root = element.exact_root(q).expect("trivial class");
        let cert = Certificate::PerfectPowerMember { element, root, exponent: q };
        return Ok(Verdict::new(Status::Holds, cert, set, q));
    }
    let rows = classes
        .into_iter()
        .map(|(i, c)| CoverRow { source: set[i].clone(), base: c.rep, layers: 0 })
        .collect();
    let (status, cert) = cover_decision(rows, q, opts)?;
    let mut verdict = Verdict::new(status, cert, set, q);
    if status == Status::Fails && opts.evidence {
        verdict.counterexample = find_counterexample(set, q, opts.evidence_bound);
    }
    Ok(verdict)
}
