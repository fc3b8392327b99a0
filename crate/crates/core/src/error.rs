use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the core computations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("series contexts differ")]
    ContextMismatch,
    #[error("unknown indeterminate index {0}")]
    UnknownVariable(usize),
    #[error("inner series {index} has a nonzero constant term; composition undefined")]
    NonzeroConstantTerm { index: usize },
    #[error("expected {expected} inner series, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("denominator has zero constant term; not a unit")]
    NotAUnit,
    #[error("requested jet order {requested} exceeds truncation order {order}")]
    JetOrderTooLarge { requested: u32, order: u32 },
    #[error("truncation order exhausted")]
    OrderExhausted,
    #[error("division of a series by a monomial is not exact")]
    NotDivisible,
    #[error("invalid manifold: {0}")]
    InvalidManifold(String),
    #[error("base point is not on the manifold: defining function {index} does not vanish there")]
    BasePointNotOnManifold { index: usize },
    #[error("reality check failed: {0}")]
    RealityFailure(String),
    #[error("not generic at the base point: r(p) = {r}")]
    NotGeneric { r: usize },
    #[error("the requested solved variables {0:?} give a singular minor at 0")]
    SingularMinor(Vec<usize>),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("map does not fix the origin: component {index} has a constant term")]
    MapNotBasePointPreserving { index: usize },
    #[error("map is not invertible at 0")]
    NotInvertible,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Fatal(String),
}

pub type Result<T> = core::result::Result<T, Error>;
