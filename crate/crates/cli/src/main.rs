//! `locus`: one-shot queries against the decision engine.
//!
//! Exit codes: 0 holds (or success), 1 fails (or rejected certificate),
//! 2 inconclusive, 3 bad input, 4 capacity exceeded, 5 a verdict that
//! contradicts sieve evidence.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use locus::family::FamilySpec;
use locus::verify::{consistency_check, verify_with, VerifyError};
use locus::{decide_report, skalba_oracle, CaseTag, DecideOptions, Decision, Error, FactoredRational, MonteCarlo, Status};

#[derive(Parser)]
#[command(name = "locus", version, about = "Decide whether a finite set of rationals contains an n-th power in Q_p for almost every prime p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the local n-th power property and print the verdict.
    Decide {
        #[command(flatten)]
        input: SetInput,
        #[arg(long)]
        n: u64,
        /// Largest covering enumeration.
        #[arg(long, default_value_t = 1 << 24)]
        ceiling: u64,
        /// Attach a counterexample prime to failing verdicts.
        #[arg(long)]
        evidence: bool,
        /// Prime bound for counterexamples and inconclusive scans.
        #[arg(long, default_value_t = 10_000)]
        evidence_bound: u64,
        /// Sample oversized covering instances instead of refusing them.
        #[arg(long)]
        monte_carlo: bool,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Scan bound for the consistency check run on every verdict.
        #[arg(long, default_value_t = 2_000)]
        check_bound: u64,
        #[command(flatten)]
        out: Output,
    },
    /// List the primes in [lo, hi] where no element is an n-th power residue.
    Sieve {
        #[command(flatten)]
        input: SetInput,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 3)]
        lo: u64,
        #[arg(long, default_value_t = 10_000)]
        hi: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Run the brute-force subset-pair oracle for an odd prime power n.
    Oracle {
        #[command(flatten)]
        input: SetInput,
        #[arg(long)]
        n: u64,
        /// Most elements the oracle accepts.
        #[arg(long, default_value_t = 8)]
        oracle_limit: usize,
        /// Largest modulus the oracle accepts.
        #[arg(long, default_value_t = 27)]
        oracle_modulus: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Print a standard family as a JSON array.
    Generate {
        #[command(subcommand)]
        family: Family,
        #[command(flatten)]
        out: Output,
    },
    /// Re-check a verdict document produced by `decide`.
    VerifyCertificate {
        /// Verdict JSON, or `-` for standard input.
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 1 << 24)]
        ceiling: u64,
        #[arg(long, default_value_t = 2_000)]
        check_bound: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum Family {
    /// {a, b, ab, ab^2}
    CubicQuad {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    /// {p1, p2, p1 p2}
    SquareTriple {
        #[arg(long)]
        p1: u64,
        #[arg(long)]
        p2: u64,
    },
    /// Every element raised to e.
    Lifted {
        #[command(flatten)]
        input: SetInput,
        #[arg(long)]
        e: u64,
    },
    /// p+1 elements built from q1, q2 for odd n with smallest prime p.
    OddOptimal {
        #[arg(long)]
        q1: u64,
        #[arg(long)]
        q2: u64,
        #[arg(long)]
        n: u64,
    },
    /// {q1, q2, q1 q2} raised to n/2.
    EvenOptimal {
        #[arg(long)]
        q1: u64,
        #[arg(long)]
        q2: u64,
        #[arg(long)]
        n: u64,
    },
    /// A two-element exceptional set for even n.
    ExceptionalPair {
        #[arg(long)]
        n: u64,
        /// One of a0eq1, a0eq2_neg2, a0eq2_pj, a0eq2_pj_neg2, a0ge3_2half,
        /// a0ge3_pj, a0ge3_pj_2, a0ge3_2pj, a0ge3_2pj_2.
        #[arg(long = "case")]
        case_tag: CaseTag,
        /// 0-based index of the odd prime of n.
        #[arg(long)]
        j: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        alpha1: FactoredRational,
        #[arg(long, allow_hyphen_values = true)]
        alpha2: FactoredRational,
    },
}

#[derive(Args)]
struct SetInput {
    /// An element such as 12, -27 or 3/2; repeatable.
    #[arg(long = "elem", allow_hyphen_values = true)]
    elems: Vec<String>,
    /// A file with one element per line; `#` starts a comment.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    /// Also write the JSON document to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

/// A failed run: exit code and message.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(if e.is_capacity() { 4 } else { 3 }, e.to_string())
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Engine(e) => e.into(),
            VerifyError::Rejected(_) => Failure(1, e.to_string()),
            VerifyError::Inconsistent(_) => Failure(5, e.to_string()),
        }
    }
}

fn read_text(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Failure(3, format!("stdin: {e}")))
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure(3, format!("{}: {e}", path.display())))
    }
}

impl SetInput {
    fn load(&self) -> Result<Vec<FactoredRational>, Failure> {
        let mut raw = self.elems.clone();
        if let Some(path) = &self.file {
            let text = read_text(path)?;
            raw.extend(
                text.lines()
                    .map(|l| l.split('#').next().unwrap_or("").trim())
                    .filter(|l| !l.is_empty())
                    .map(String::from),
            );
        }
        if raw.is_empty() {
            return Err(Failure(3, "no elements given; use --elem or --file".into()));
        }
        raw.iter().map(|s| s.parse().map_err(Failure::from)).collect()
    }
}

fn emit<T: Serialize>(value: &T, out: &Output) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    // a closed pipe downstream is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    if let Some(path) = &out.json {
        std::fs::write(path, format!("{text}\n")).map_err(|e| Failure(3, format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::Holds => 0,
        Status::Fails => 1,
        Status::Inconclusive => 2,
    }
}

/// `(q, m)` with `n = q^m` and `q` an odd prime.
fn odd_prime_power(n: u64) -> Result<(u64, u32), Failure> {
    match locus::rational::prime_factors_u64(n).as_slice() {
        [(q, m)] if *q > 2 => Ok((*q, *m)),
        _ => Err(Failure(3, format!("{n} is not a power of an odd prime"))),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Decide { input, n, ceiling, evidence, evidence_bound, monte_carlo, samples, seed, check_bound, out } => {
            let set = input.load()?;
            let opts = DecideOptions {
                enumeration_ceiling: ceiling,
                evidence,
                evidence_bound,
                monte_carlo: monte_carlo.then_some(MonteCarlo { samples, seed }),
                ..DecideOptions::default()
            };
            let decision = decide_report(&set, n, &opts)?;
            emit(&decision, &out)?;
            consistency_check(&set, n, &decision.verdict, check_bound)?;
            Ok(status_code(decision.verdict.status))
        }
        Command::Sieve { input, n, lo, hi, out } => {
            let set = input.load()?;
            let report = locus::sieve::scan(&set, n, lo, hi, &Default::default())?;
            emit(&report, &out)?;
            Ok(0)
        }
        Command::Oracle { input, n, oracle_limit, oracle_modulus, out } => {
            let set = input.load()?;
            let (q, m) = odd_prime_power(n)?;
            let opts = DecideOptions { oracle_max_len: oracle_limit, oracle_max_modulus: oracle_modulus, ..Default::default() };
            let verdict = skalba_oracle(&set, q, m, &opts)?;
            let status = verdict.status;
            emit(&Decision { verdict, n, elements: set }, &out)?;
            Ok(status_code(status))
        }
        Command::Generate { family, out } => {
            let spec = match family {
                Family::CubicQuad { a, b } => FamilySpec::CubicQuad { a, b },
                Family::SquareTriple { p1, p2 } => FamilySpec::SquareTriple { p1, p2 },
                Family::Lifted { input, e } => FamilySpec::Lifted { elements: input.load()?, e },
                Family::OddOptimal { q1, q2, n } => FamilySpec::OddOptimal { q1, q2, n },
                Family::EvenOptimal { q1, q2, n } => FamilySpec::EvenOptimal { q1, q2, n },
                Family::ExceptionalPair { n, case_tag, j, alpha1, alpha2 } => {
                    FamilySpec::ExceptionalPair { n, case_tag, j, alpha1, alpha2 }
                }
            };
            emit(&spec.generate()?, &out)?;
            Ok(0)
        }
        Command::VerifyCertificate { file, ceiling, check_bound, out } => {
            let text = read_text(&file)?;
            let doc: Decision =
                serde_json::from_str(&text).map_err(|e| Failure(3, format!("not a verdict document: {e}")))?;
            let opts = DecideOptions { enumeration_ceiling: ceiling, ..Default::default() };
            let result = verify_with(&doc.elements, doc.n, &doc.verdict, &opts)
                .and_then(|_| consistency_check(&doc.elements, doc.n, &doc.verdict, check_bound));
            #[derive(Serialize)]
            struct Report {
                valid: bool,
                #[serde(skip_serializing_if = "Option::is_none")]
                reason: Option<String>,
            }
            let report = Report { valid: result.is_ok(), reason: result.as_ref().err().map(|e| e.to_string()) };
            emit(&report, &out)?;
            result?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("locus: {msg}");
            ExitCode::from(code)
        }
    }
}
