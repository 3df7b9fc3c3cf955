use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the toric kernel and the classification pipeline.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("zero vector has no primitive part")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular basis")]
    SingularBasis,
    #[error("vector not in the span of the basis")]
    NotInSpan,
    #[error("ray {index} is not primitive")]
    NonPrimitiveRay { index: usize },
    #[error("ray {index} duplicates ray {first}")]
    DuplicateRay { index: usize, first: usize },
    #[error("maximal cone {index} is degenerate (rays not linearly independent)")]
    DegenerateCone { index: usize },
    #[error("maximal cone {index} has {got} rays, expected {expected} in a simplicial full-dimensional fan")]
    ConeSizeMismatch { index: usize, expected: usize, got: usize },
    #[error("ray {index} does not appear in any maximal cone")]
    DanglingRay { index: usize },
    #[error("cone {index} has an out-of-range ray index {ray}")]
    RayIndexOutOfRange { index: usize, ray: usize },
    #[error("cones {first} and {second} do not intersect in a common face")]
    ConesNotMeetingInFace { first: usize, second: usize },
    #[error("fan not complete")]
    NotComplete,
    #[error("fan not smooth at \u{3c3}(P)")]
    NotSmoothAtSigma,
    #[error("fan is not smooth")]
    NotSmooth,
    #[error("divisor not Cartier on cone {cone}")]
    NotCartier { cone: usize },
    #[error("divisor and relation belong to different fans")]
    FanMismatch,
    #[error("divisor is not nef")]
    NotNef,
    #[error("not a cone of the fan")]
    NotACone,
    #[error("{0} is not a primitive collection of the fan")]
    NotAPrimitiveCollection(String),
    #[error("vector not in the relative interior of the cone")]
    NotInteriorVector,
    #[error("no blowdown along P: {0}")]
    NoBlowdown(String),
    #[error("blowdown verification failed: {0}")]
    BlowdownVerification(String),
    #[error("relation is not a flop relation: {0}")]
    NotFlopRelation(String),
    #[error("relation is not extremal (pass the formal flag to force the move)")]
    NotExtremal,
    #[error("invalid constructor parameters: {0}")]
    InvalidParams(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("invalid fan JSON: {0}")]
    Json(String),
}
