use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero is not allowed in an input set")]
    ZeroInput,
    #[error("cannot parse rational `{0}`")]
    Parse(String),
    #[error("factorization capacity exceeded: {0}")]
    FactorizationCapacityExceeded(String),
    #[error("power layers of a unit are unbounded")]
    UnitInput,
    #[error("prime {0} is not admissible for a residue test")]
    BadPrime(u64),
    #[error("sieve range [{lo}, {hi}] exceeds the ceiling {ceiling}")]
    RangeTooLarge { lo: u64, hi: u64, ceiling: u64 },
    #[error("element {0} is not q-free")]
    NotQFree(String),
    #[error("units must be filtered before building hyperplanes")]
    UnitElement,
    #[error("enumeration of {points} points exceeds the ceiling {ceiling}")]
    InstanceTooLarge { points: u128, ceiling: u64 },
    #[error("element {0} is already a perfect power of the target exponent")]
    PerfectPowerPresent(String),
    #[error("oracle limit exceeded: {0}")]
    OracleLimitExceeded(String),
    #[error("exponent {0} is not a unit modulo {1}")]
    NonUnitExponent(i64, u64),
    #[error("degenerate family parameters: {0}")]
    DegenerateParameters(String),
    #[error("exponent {0} is not even")]
    NotEven(u64),
    #[error("expected {expected} elements, got {got}")]
    WrongCardinality { expected: usize, got: usize },
    #[error("case {0} does not apply: {1}")]
    InapplicableCase(String, String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty input set")]
    EmptySet,
}

impl Error {
    /// Capacity-type failures: the question is well posed but too large.
    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            Error::FactorizationCapacityExceeded(_)
                | Error::RangeTooLarge { .. }
                | Error::InstanceTooLarge { .. }
                | Error::OracleLimitExceeded(_)
        )
    }
}
