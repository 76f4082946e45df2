use thiserror::Error;

/// Errors raised by frame validation, polynomial construction and quadrature.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("frame is not isotropic: residual {0:.3e}")]
    NotIsotropic(f64),
    #[error("frame is not normalised: residual {0:.3e}")]
    NotNormalised(f64),
    #[error("matrix {which} is singular or ill-conditioned (condition number {condition:.3e})")]
    Singular { which: &'static str, condition: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("recursion matrix is not symmetric: residual {0:.3e}")]
    SymmetryViolation(f64),
    #[error("polynomial matrix is not symmetric: residual {0:.3e}")]
    AsymmetricM(f64),
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("off-diagonal entry ({0}, {1}) is zero")]
    ZeroOffdiagonal(usize, usize),
    #[error("multi-index {0} exceeds the supported range (per axis <= 32, total <= 40)")]
    IndexTooLarge(String),
    #[error("phase-space lift violates part {part}: residual {residual:.3e}")]
    LiftInvariantViolation { part: u8, residual: f64 },
    #[error("Wigner factorisation requires equal frames")]
    RequiresEqualFrames,
    #[error("quadrature under-resolved: tail estimate {tail:.3e} exceeds {tolerance:.3e}")]
    QuadratureUnderResolved { tail: f64, tolerance: f64 },
    #[error("grid has {0} points, limit is 10^7")]
    GridTooLarge(usize),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
