use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("extension degree {0} outside 1..=12")]
    DegreeTooLarge(u32),
    #[error("size cap exceeded: {0}")]
    TooLarge(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("not in group: {0}")]
    NotInGroup(String),
    #[error("generators do not satisfy the form equation: {0}")]
    ClosureIncomplete(String),
    #[error("character exponent {0} is not regular")]
    NotRegular(u64),
    #[error("class functions live on different groups")]
    DomainMismatch,
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("isotypic projector has rank {found}, expected {expected}")]
    ProjectorRankMismatch { expected: usize, found: usize },
    #[error("Levi mismatch: {0}")]
    LeviMismatch(String),
    #[error("convolution left the basis span (residual {0:e})")]
    BasisExpressFailure(f64),
    #[error("quadratic relation mismatch: measured lambda {measured}, expected {expected}")]
    RelationMismatch { measured: f64, expected: f64 },
    #[error("Hecke elements with different parameters")]
    ParameterMismatch,
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("an unramified character takes nonzero values")]
    ZeroCharacterValue,
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
