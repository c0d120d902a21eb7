use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("factor {factor}: {found} coordinates given for P^{dim} (expected {expected})")]
    DimensionMismatch {
        factor: usize,
        dim: usize,
        found: usize,
        expected: usize,
    },
    #[error("factor {factor}: weight vector has length {found}, group rank is {expected}")]
    WeightLength {
        factor: usize,
        found: usize,
        expected: usize,
    },
    #[error("factor {factor}: weight data does not match group kind {kind}")]
    GroupMismatch { factor: usize, kind: &'static str },
    #[error("factor {factor}: multidegree must be >= 1, got {degree}")]
    NonPositiveDegree { factor: usize, degree: i64 },
    #[error("bundle has {found} degrees for {expected} factors")]
    DegreeCount { found: usize, expected: usize },
    #[error("twist has length {found}, group rank is {expected}")]
    TwistLength { found: usize, expected: usize },
    #[error("su2 bundles carry no character twist")]
    Su2Twist,
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("scenario needs at least one factor")]
    NoFactors,
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("monomial degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("tensor power must be >= 1")]
    ZeroPower,
    #[error("weight range of {cells} cells exceeds the configured bound {bound}; raise the bound")]
    WeightRangeExceeded { cells: usize, bound: usize },
    #[error("section count overflowed 128-bit integers")]
    CountOverflow,
    #[error("brute-force enumeration of {size} monomials exceeds the bound {bound}")]
    EnumerationBound { size: u128, bound: u128 },
    #[error("level {0} was not prepared in this counter")]
    LevelNotPrepared(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("generic stabilizer is infinite; compatibility is undefined")]
    InfiniteStabilizer,
    #[error("generic stabilizer is not central")]
    NonCentralStabilizer,
    #[error("associated character is not well defined: {0}")]
    IllDefinedCharacter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("quasi-polynomial fit did not stabilize: {0}")]
    NotStabilized(String),
}
