use thiserror::Error;

use crate::rat::Rat;

/// Errors raised across the toolkit.
///
/// Variants fall into two groups: bad input (unknown polytope, malformed
/// files, non-symmetries) and internal invariant failures, which signal a bug
/// rather than a user mistake. [`Error::is_internal`] tells them apart.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("degenerate lift: projected points are collinear")]
    DegenerateLift,
    #[error("points are coplanar; no 3-dimensional hull")]
    Coplanar,
    #[error("dilation factor must be positive, got {0}")]
    InvalidDilation(i64),
    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),
    #[error("Pick verification failed: {0}")]
    PickVerificationFailed(String),
    #[error("not a symmetry: {0}")]
    NotASymmetry(String),
    #[error("group too large (more than {0} elements)")]
    GroupTooLarge(usize),
    #[error("group element maps lattice point {0:?} outside the lattice set")]
    OrbitOutside((i64, i64)),
    #[error("point outside domain")]
    OutsideDomain,
    #[error("height vector has length {got}, lattice has {expected} points")]
    LengthMismatch { expected: usize, got: usize },
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("certificate invalid: {0}")]
    CertificateInvalid(String),
    #[error("oracle precondition violated: {0}")]
    OraclePrecondition(String),
    #[error("malformed linear program: {0}")]
    LpDimension(String),
    #[error(
        "iteration cap of {iterations} reached; best bounds: lower {lower}, upper {upper}"
    )]
    MaxIterations {
        iterations: usize,
        lower: Box<Rat>,
        upper: Box<Rat>,
    },
    #[error("unknown polytope {0:?}")]
    UnknownPolytope(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True when the error indicates a bug in this crate rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::PickVerificationFailed(_)
                | Error::OracleMismatch(_)
                | Error::CertificateInvalid(_)
                | Error::Invariant(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
