use thiserror::Error;

pub type Result<T> = std::result::Result<T, NcgError>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum NcgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("element lies outside the span of the basis (residual {residual:.3e})")]
    OutsideSpan { residual: f64 },

    #[error("basis elements are linearly dependent")]
    LinearlyDependent,

    #[error("subspace is not closed under the bracket (residual {residual:.3e})")]
    NotSubalgebra { residual: f64 },

    #[error("Killing form is degenerate on the subalgebra")]
    DegenerateKilling,

    #[error("decomposition is not reductive: [h, l] leaves l (residual {residual:.3e})")]
    NotReductive { residual: f64 },

    #[error("group element is singular")]
    SingularElement,

    #[error("element is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("generator images do not define a Lie algebra homomorphism (residual {residual:.3e})")]
    HomomorphismViolation { residual: f64 },

    #[error(
        "ambiguous numerical rank: singular value {singular_value:.3e} within a factor 10 of threshold {threshold:.3e}"
    )]
    AmbiguousRank { singular_value: f64, threshold: f64 },

    #[error("Casimir spectrum does not match an su(2) representation: {0}")]
    CasimirSpectrum(String),

    #[error("pinned values are inconsistent with the equivariance constraints (residual {residual:.3e})")]
    InconsistentPins { residual: f64 },

    #[error("intertwiner constraint violated (residual {residual:.3e})")]
    ConstraintViolation { residual: f64 },

    #[error("evaluation point has r = 0")]
    ZeroRadius,

    #[error("polar angle {theta} is too close to the chart poles")]
    ChartSingularity { theta: f64 },

    #[error("matrix is not a proper rotation (defect {defect:.3e})")]
    NotRotation { defect: f64 },

    #[error("expression error: {0}")]
    Expression(String),

    #[error("{0}")]
    InvalidInput(String),
}

impl NcgError {
    /// Errors that come from numerical decisions rather than malformed input.
    pub fn is_numerical_ambiguity(&self) -> bool {
        matches!(
            self,
            NcgError::AmbiguousRank { .. } | NcgError::CasimirSpectrum(_)
        )
    }
}
