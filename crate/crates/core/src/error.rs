use thiserror::Error;

/// Every failure the solvers, reductions and exporters can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("instance has no objects")]
    EmptyInstance,
    #[error("object {index} has non-positive size {size}")]
    NonPositiveSize { index: usize, size: i64 },
    #[error("capacity must be positive, got {0}")]
    NonPositiveCapacity(String),
    #[error("object {index} of size {size} exceeds the bin capacity {capacity}")]
    CapacityTooSmallForObject {
        index: usize,
        size: u64,
        capacity: String,
    },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("internal invariant broken: {0}")]
    InternalInvariant(String),
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),
    #[error("trivial instance: {0}")]
    TrivialInstance(String),
    #[error("sum {0} is not divisible by 3")]
    SumNotDivisible(u64),
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("unsupported model parameter: {0}")]
    UnsupportedKindParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for the size guards that refuse exhaustive work.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::InstanceTooLarge(_))
    }
}
