use thiserror::Error;

/// Errors raised by constructions and validators.
///
/// Variants split into three groups: input/shape problems, violated
/// hypotheses of a construction, and internal invariant failures (a
/// construction step produced something its own bookkeeping rejects).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("base graph is not a path")]
    NotAPath,
    #[error("cut edges carry nonzero labels; normalize them first")]
    CutEdgesNotNormalized,
    #[error("{0} is not a unit mod {1}")]
    NonUnit(u64, u64),
    #[error("invalid billiard parameters: {0}")]
    InvalidParams(String),
    #[error("fiber index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("pair at position {0} is not order preserving")]
    NotOrderPreserving(usize),
    #[error("path has an odd number of vertices")]
    OddVertexCount,
    #[error("endpoint voltage mismatch: {0}")]
    EndpointVoltageMismatch(String),
    #[error("joining requires an even number of paths")]
    OddCount,
    #[error("no paths supplied")]
    EmptyInput,
    #[error("path is not odd shifting")]
    NotOddShifting,
    #[error("decomposition does not partition the tree edges: {0}")]
    NotAPartition(String),
    #[error("decomposition paths share a non-endpoint vertex {0}")]
    NotInternallyDisjoint(usize),
    #[error("decomposition path {0} is not odd shifting")]
    PathNotOddShifting(usize),
    #[error("decomposition is not properly weighted: joint {joint} has weight {weight} > {n}")]
    NotProperlyWeighted { joint: usize, weight: u64, n: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime too small: {0}")]
    PrimeTooSmall(String),
    #[error("{0} does not divide {1}")]
    NotDivisible(u64, u64),
    #[error("matching edges collide: {0}")]
    Collision(String),
    #[error("condition not met: {0}")]
    ConditionNotMet(String),
    #[error("{0} does not generate the group of order {1}")]
    NotGenerator(u64, u64),
    #[error("parameters rejected: {0}")]
    ParamsRejected(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("internal invariant broken: {0}")]
    InternalInvariantBroken(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("distribution has empty support")]
    EmptySupport,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit-code category used by the command line front end:
    /// 2 for parse errors, 3 for violated hypotheses, 4 for internal
    /// invariant failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::InvalidTree(_) => 2,
            Error::InternalInvariantBroken(_) => 4,
            _ => 3,
        }
    }
}
