//! Deciding when a finite set of rationals contains an `n`-th power in
//! `Q_p` for almost every prime `p`.
//!
//! The entry point is [`decide`], which returns a three-valued [`Verdict`]
//! backed by a certificate that [`verify()`](verify::verify) can re-check
//! from the input alone. The building blocks are exposed too: exact
//! factored rationals, a residue sieve, covering checks over finite rings,
//! the square criterion, a brute-force subset-pair oracle, and the standard
//! witness families.
//!
//! ```
//! use locus::{decide, DecideOptions, FactoredRational, Status};
//!
//! let set: Vec<FactoredRational> = ["2", "3", "6", "18"].iter().map(|s| s.parse().unwrap()).collect();
//! let verdict = decide(&set, 3, &DecideOptions::default()).unwrap();
//! assert_eq!(verdict.status, Status::Holds);
//! ```

pub mod arith;
pub mod classifier;
pub mod covering;
pub mod error;
pub mod family;
pub mod prime_power;
pub mod rational;
pub mod sieve;
pub mod square;
pub mod verdict;
pub mod verify;
pub mod wide;

pub use classifier::{classify_singleton, decide, decide_report, match_exceptional_pair, CaseTag, ExceptionalForm};
pub use covering::decide_q;
pub use error::{Error, Result};
pub use family::FamilySpec;
pub use prime_power::{decide_prime_power, skalba_oracle, SkalbaWitness};
pub use rational::{FactoredRational, PowerClass};
pub use sieve::SieveReport;
pub use square::{decide_square, decide_two_power, OddSubsetWitness};
pub use verdict::{Certificate, DecideOptions, Decision, MonteCarlo, Status, Verdict};
