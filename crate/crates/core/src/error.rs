use thiserror::Error;

/// Errors raised by the algebra, geometry and kernel evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by the zero quaternion")]
    ZeroDivisor,
    #[error("real power {exponent} of a zero quaternion")]
    ZeroBase { exponent: f64 },
    #[error("non-integer power {exponent} of the negative real {base}")]
    BranchCut { base: f64, exponent: f64 },
    #[error("dilation factor must be positive, got {0}")]
    NonPositiveDilation(f64),
    #[error("Cayley transform pole: |1 + {which}| = {modulus:e}")]
    CayleyPole { which: &'static str, modulus: f64 },
    #[error("point is not on the boundary of the Siegel half-space (height {height:e})")]
    OffBoundary { height: f64 },
    #[error("matrix is not orthogonal (max |R^T R - I| = {deviation:e})")]
    NotOrthogonal { deviation: f64 },
    #[error("vector field index {0} out of range 0..=3")]
    FieldIndex(usize),
    #[error("finite-difference step {0:e} is too small")]
    StepUnderflow(f64),
    #[error("non-finite value encountered while evaluating {0}")]
    NonFinite(&'static str),
    #[error("kernel pole: {0}")]
    Pole(&'static str),
    #[error("precondition violated: {0}")]
    Domain(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("quadrature: {0}")]
    Quadrature(#[from] crate::quad::QuadError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// A quadrature ran out of its subdivision budget.
    pub fn is_nonconvergence(&self) -> bool {
        matches!(self, Error::Quadrature(crate::quad::QuadError::Budget { .. }))
    }
}
