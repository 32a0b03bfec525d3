use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero of multiplicity > 1 near {0}")]
    MultipleZero(String),
    #[error("degree must be at least 1")]
    NoZeros,
    #[error("invalid differential: {0}")]
    InvalidDifferential(String),
    #[error("cube-root branch ambiguous at {0}")]
    BranchAmbiguity(String),
    #[error("quadrature did not converge: {0}")]
    QuadratureStall(String),
    #[error("spectral core walk did not close: {0}")]
    CoreAssemblyFailure(String),
    #[error("no core type matches: {0}")]
    UnclassifiedCore(String),
    #[error("t = {0} could not be reduced to the fundamental domain")]
    NotReducible(String),
    #[error("only two saddle connections; no core triangle")]
    NoTriangle,
    #[error("wall not bracketed on scan line {0}")]
    WallNotBracketed(String),
    #[error("ambiguous lattice class: {0}")]
    AmbiguousClass(String),
    #[error("an active class lies on the sector boundary: {0}")]
    BoundaryRayActive(String),
    #[error("operation requires the normalized degree-three family")]
    NotNormalized,
}

pub type Result<T> = std::result::Result<T, Error>;
