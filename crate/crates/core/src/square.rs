//! Squares, and the dispatch for exponents `2^a0`.
//!
//! A set contains a square locally at almost every prime exactly when some
//! odd-size subset multiplies to a perfect square. Over `F_2` with one sign
//! coordinate and one coordinate per support prime, that fails precisely when
//! a functional takes the value 1 on every element's vector; such a
//! functional is returned as an uncovered point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{dedup_by_class, joint_support, reduce_class, FactoredRational};
use crate::sieve::{find_counterexample, scan};
use crate::verdict::{Certificate, CoverData, CoverRow, DecideOptions, Status, Verdict};

/// Above this many elements the minimal witness search gives way to a
/// kernel basis.
pub const MINIMAL_WITNESS_LIMIT: usize = 20;

/// `indices` (0-based, odd count) pick elements whose product is `root^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddSubsetWitness {
    pub indices: Vec<usize>,
    pub root: FactoredRational,
}

/// Sign coordinate first (reported as `-1`), then the support primes.
pub(crate) fn parity_vectors(set: &[FactoredRational]) -> (Vec<i128>, Vec<Vec<u64>>) {
    let primes = joint_support(set);
    let mut support = vec![-1i128];
    support.extend(primes.iter().map(|&p| p as i128));
    let vectors = set
        .iter()
        .map(|x| {
            let mut v = vec![x.is_negative() as u64];
            v.extend(x.exponent_vector(&primes).iter().map(|e| e.rem_euclid(2) as u64));
            v
        })
        .collect();
    (support, vectors)
}

/// Solves `v_j · y = 1` for every `j` over `F_2`.
fn solve_all_ones(vectors: &[Vec<u64>], dims: usize) -> Option<Vec<u64>> {
    let mut rows: Vec<Vec<u8>> = vectors
        .iter()
        .map(|v| v.iter().map(|&b| b as u8).chain(std::iter::once(1)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..dims {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] == 1) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][col] == 1 {
                for c in col..=dims {
                    rows[i][c] ^= rows[r][c];
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[dims] == 1) {
        return None;
    }
    let mut y = vec![0u64; dims];
    for (i, &col) in pivots.iter().enumerate() {
        y[col] = rows[i][dims] as u64;
    }
    Some(y)
}

fn is_zero_sum(vectors: &[Vec<u64>], indices: &[usize], dims: usize) -> bool {
    (0..dims).all(|d| indices.iter().map(|&j| vectors[j][d]).sum::<u64>() % 2 == 0)
}

/// Smallest odd subset with zero sum, ties broken lexicographically.
fn minimal_witness(vectors: &[Vec<u64>], dims: usize) -> Option<Vec<usize>> {
    let l = vectors.len();
    for size in (1..=l).step_by(2) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if is_zero_sum(vectors, &idx, dims) {
                return Some(idx);
            }
            // next combination in lexicographic order
            let Some(i) = (0..size).rev().find(|&i| idx[i] != i + l - size) else { break };
            idx[i] += 1;
            for k in i + 1..size {
                idx[k] = idx[k - 1] + 1;
            }
        }
    }
    None
}

/// Some odd-weight kernel vector of `x ↦ Σ x_j v_j`, from a reduced basis.
fn kernel_witness(vectors: &[Vec<u64>], dims: usize) -> Option<Vec<usize>> {
    let l = vectors.len();
    // rows are coordinates, columns are elements
    let mut m: Vec<Vec<u8>> = (0..dims).map(|d| vectors.iter().map(|v| v[d] as u8).collect()).collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..l {
        let Some(p) = (r..dims).find(|&i| m[i][col] == 1) else { continue };
        m.swap(r, p);
        for i in 0..dims {
            if i != r && m[i][col] == 1 {
                for c in col..l {
                    m[i][c] ^= m[r][c];
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    (0..l).filter(|c| !pivot_cols.contains(c)).find_map(|free| {
        let mut x = vec![0u8; l];
        x[free] = 1;
        for (i, &pc) in pivot_cols.iter().enumerate() {
            x[pc] = m[i][free];
        }
        let chosen: Vec<usize> = (0..l).filter(|&j| x[j] == 1).collect();
        (chosen.len() % 2 == 1).then_some(chosen)
    })
}

/// Decides whether `set` contains a square in `Q_p` for almost every prime.
pub fn decide_square(set: &[FactoredRational], opts: &DecideOptions) -> Result<Verdict> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let (support, vectors) = parity_vectors(set);
    let dims = support.len();
    if let Some(y) = solve_all_ones(&vectors, dims) {
        let data = CoverData {
            modulus: 2,
            support,
            coeffs: vectors,
            point: Some(y),
            rows: set
                .iter()
                .map(|x| CoverRow { source: x.clone(), base: reduce_class(x, 2).rep, layers: 0 })
                .collect(),
        };
        let mut v = Verdict::new(Status::Fails, Certificate::UncoveredPoint(data), set, 2);
        if opts.evidence {
            v.counterexample = find_counterexample(set, 2, opts.evidence_bound);
        }
        return Ok(v);
    }
    let indices = if set.len() <= MINIMAL_WITNESS_LIMIT {
        minimal_witness(&vectors, dims)
    } else {
        kernel_witness(&vectors, dims)
    }
    .expect("an odd zero-sum subset exists when the parity system is unsolvable");
    let product = indices.iter().fold(FactoredRational::one(), |acc, &j| acc.mul(&set[j]));
    let root = product.exact_root(2).expect("witness product is a square");
    Ok(Verdict::new(Status::Holds, Certificate::OddSubsetWitness(OddSubsetWitness { indices, root }), set, 2))
}

/// Exponent `2^a0`: squares for `a0 = 1`, the singleton and pair criteria for
/// at most two classes, and an evidence scan otherwise.
pub fn decide_two_power(set: &[FactoredRational], a0: u32, opts: &DecideOptions) -> Result<Verdict> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if a0 == 0 || a0 > 62 {
        return Err(Error::InvalidArgument(format!("unsupported exponent 2^{a0}")));
    }
    if a0 == 1 {
        return decide_square(set, opts);
    }
    let n = 1u64 << a0;
    let classes = dedup_by_class(set, n);
    if classes.len() <= 2 {
        return crate::classifier::decide(set, n, opts);
    }
    let report = scan(set, n, 3, opts.evidence_bound.max(3), &Default::default())?;
    Ok(Verdict::new(Status::Inconclusive, Certificate::Evidence(report), set, n))
}
