//! Browser bindings for the decision engine. Every export takes plain text
//! from a form field and returns a JSON string; errors surface as thrown
//! `Error`s on the JavaScript side.
//!
//! The `*_json` functions are ordinary Rust so they can be tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use locus::covering::{build_hyperplanes, Hyperplane};
use locus::prime_power::reduce_to_prime_case;
use locus::verify::verify;
use locus::{decide_report, DecideOptions, FactoredRational};

/// Largest `q` the covering grid will draw.
pub const GRID_LIMIT: u64 = 31;

/// Splits on commas, semicolons and whitespace.
pub fn parse_set(text: &str) -> Result<Vec<FactoredRational>, String> {
    let set: Vec<FactoredRational> = text
        .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|e| format!("{t}: {e}")))
        .collect::<Result<_, _>>()?;
    if set.is_empty() {
        return Err("enter at least one element".into());
    }
    Ok(set)
}

#[derive(Serialize)]
struct Decided<T> {
    #[serde(flatten)]
    decision: T,
    verified: bool,
}

/// The verdict document, plus whether its certificate re-checks.
pub fn decide_json(elements: &str, n: u64, evidence_bound: u64) -> Result<String, String> {
    let set = parse_set(elements)?;
    let opts = DecideOptions {
        evidence: true,
        evidence_bound,
        // keep the page responsive on large inputs
        enumeration_ceiling: 1 << 20,
        ..DecideOptions::default()
    };
    let decision = decide_report(&set, n, &opts).map_err(|e| e.to_string())?;
    let verified = verify(&set, n, &decision.verdict).is_ok();
    serde_json::to_string(&Decided { decision, verified }).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Grid {
    q: u64,
    /// Primes labelling the axes.
    #[serde(with = "locus::wide")]
    support: Vec<u128>,
    /// Reduced representative of each element, in input order.
    reps: Vec<FactoredRational>,
    /// Exponent form of each element.
    forms: Vec<Vec<u64>>,
    /// `rows[a][b]` lists the elements whose form vanishes at `(a, b)`.
    rows: Vec<Vec<Vec<usize>>>,
    covered: bool,
}

/// The exponent plane `F_q^2` of a set supported on at most two primes,
/// marking which forms vanish at each point. A point no form vanishes at is a
/// family of primes where no element is a `q`-th power residue.
pub fn covering_grid_json(elements: &str, q: u64) -> Result<String, String> {
    if q > GRID_LIMIT {
        return Err(format!("q must be at most {GRID_LIMIT} to draw"));
    }
    let set = parse_set(elements)?;
    let reps = reduce_to_prime_case(&set, q, 1).map_err(|e| e.to_string())?;
    let (matrix, _, _) = build_hyperplanes(&reps, q).map_err(|e| e.to_string())?;
    let s = matrix.support.len();
    if s > 2 {
        return Err(format!("the set involves {s} primes; the grid shows at most two"));
    }
    // pad a single prime to a plane so the picture is always square
    let pad = |c: &Vec<u64>| {
        let mut c = c.clone();
        c.resize(2, 0);
        c
    };
    let forms: Vec<Vec<u64>> = matrix.columns.iter().map(pad).collect();
    let planes: Vec<Option<Hyperplane>> = forms.iter().map(|c| Hyperplane::new(c.clone())).collect();
    let rows: Vec<Vec<Vec<usize>>> = (0..q)
        .map(|a| {
            (0..q)
                .map(|b| {
                    planes
                        .iter()
                        .enumerate()
                        .filter(|(_, h)| h.as_ref().is_some_and(|h| h.eval(&[a, b], q) == 0))
                        .map(|(i, _)| i)
                        .collect()
                })
                .collect()
        })
        .collect();
    let covered = rows.iter().flatten().all(|hits| !hits.is_empty());
    let grid = Grid { q, support: matrix.support, reps, forms, rows, covered };
    serde_json::to_string(&grid).map_err(|e| e.to_string())
}

/// Primes in `[lo, hi]` where no element is an `n`-th power residue.
pub fn sieve_json(elements: &str, n: u64, lo: u64, hi: u64) -> Result<String, String> {
    let set = parse_set(elements)?;
    let report = locus::sieve::scan(&set, n, lo, hi, &Default::default()).map_err(|e| e.to_string())?;
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn decide(elements: &str, n: u32, evidence_bound: u32) -> Result<String, JsError> {
    js(decide_json(elements, n as u64, evidence_bound as u64))
}

#[wasm_bindgen]
pub fn covering_grid(elements: &str, q: u32) -> Result<String, JsError> {
    js(covering_grid_json(elements, q as u64))
}

#[wasm_bindgen]
pub fn sieve(elements: &str, n: u32, lo: u32, hi: u32) -> Result<String, JsError> {
    js(sieve_json(elements, n as u64, lo as u64, hi as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn decide_reports_a_verified_verdict() {
        let v = parse(&decide_json("2, 3, 6, 18", 3, 1000).unwrap());
        assert_eq!(v["status"], "holds");
        assert_eq!(v["verified"], true);
        let v = parse(&decide_json("2 3 12", 3, 1000).unwrap());
        assert_eq!(v["status"], "fails");
        assert_eq!(v["counterexample"], 7);
    }

    #[test]
    fn grid_marks_the_uncovered_points() {
        // {2, 3, 12}: forms (1,0), (0,1), (2,1) miss (1,2) and (2,1)
        let g = parse(&covering_grid_json("2,3,12", 3).unwrap());
        assert_eq!(g["covered"], false);
        assert_eq!(g["rows"][1][2], serde_json::json!([]));
        assert_eq!(g["rows"][1][1], serde_json::json!([2]));
        assert_eq!(g["rows"][0][0], serde_json::json!([0, 1, 2]));
        let g = parse(&covering_grid_json("2,3,6,18", 3).unwrap());
        assert_eq!(g["covered"], true);
    }

    #[test]
    fn grid_pads_a_single_prime() {
        let g = parse(&covering_grid_json("4", 5).unwrap());
        assert_eq!(g["forms"], serde_json::json!([[2, 0]]));
        assert_eq!(g["covered"], false);
    }

    #[test]
    fn grid_rejects_what_it_cannot_draw() {
        assert!(covering_grid_json("2,3,5", 3).is_err());
        assert!(covering_grid_json("2,3", 37).is_err());
        assert!(covering_grid_json("8", 3).is_err());
    }

    #[test]
    fn sieve_lists_failures() {
        let r = parse(&sieve_json("2;3;12", 3, 3, 50).unwrap());
        assert_eq!(r["failing_primes"], serde_json::json!([7, 37]));
    }

    #[test]
    fn bad_text_is_an_error() {
        assert!(parse_set("").is_err());
        assert!(parse_set("2, x").is_err());
    }
}
