use alloc::string::String;

/// Errors raised by the core toolkit.
///
/// Variants fall into three groups which the command line front end maps
/// onto distinct exit codes: malformed input (shape, labels, kinds),
/// violated invariants (a numerical contract does not hold within
/// tolerance), and numeric failures of the solvers themselves.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("space mismatch: expected {expected}, found {found}")]
    SpaceMismatch {
        expected: crate::hilbert::Space,
        found: crate::hilbert::Space,
    },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("unknown outcome label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate outcome label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(&'static str),
    #[error("unsupported input: {0}")]
    Unsupported(&'static str),

    #[error("operator is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("state is not normalised (norm squared {norm_sq})")]
    NotNormalised { norm_sq: f64 },
    #[error("density matrix trace is {trace}, expected 1")]
    BadTrace { trace: f64 },
    #[error("vectors are not orthonormal (residual {residual:e})")]
    NotOrthonormal { residual: f64 },
    #[error("operator is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("POVM is incomplete (completeness residual {residual:e})")]
    Incomplete { residual: f64 },
    #[error("POVM element `{label}` has weight {weight} outside [0, 1]")]
    WeightOutOfRange { label: String, weight: f64 },
    #[error("POVM element `{0}` is not rank one")]
    NotRankOne(String),
    #[error("POVM element `{0}` is zero")]
    ZeroElement(String),
    #[error("vectors are linearly dependent")]
    Degenerate,
    #[error("Hardy triple invariant violated: {0}")]
    HardyInvariant(&'static str),

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

/// Coarse classification of an [`Error`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Invariant,
    Numeric,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            DimensionMismatch { .. }
            | SpaceMismatch { .. }
            | ZeroDimension
            | Empty(_)
            | NonFinite(_)
            | UnknownLabel(_)
            | DuplicateLabel(_)
            | InvalidWeights(_)
            | Unsupported(_) => ErrorClass::Input,
            NoConvergence { .. } => ErrorClass::Numeric,
            _ => ErrorClass::Invariant,
        }
    }

    /// Short machine-friendly name of the violated invariant.
    pub fn name(&self) -> &'static str {
        use Error::*;
        match self {
            DimensionMismatch { .. } => "dimension",
            SpaceMismatch { .. } => "space",
            ZeroDimension => "dimension",
            Empty(_) => "non-empty",
            NonFinite(_) => "finite",
            UnknownLabel(_) => "label",
            DuplicateLabel(_) => "unique-label",
            InvalidWeights(_) => "weights",
            Unsupported(_) => "supported",
            NotHermitian { .. } => "hermitian",
            NotPositive { .. } => "positive-semidefinite",
            NotNormalised { .. } => "normalised",
            BadTrace { .. } => "unit-trace",
            NotOrthonormal { .. } => "orthonormal",
            NotUnitary { .. } => "unitary",
            Incomplete { .. } => "completeness",
            WeightOutOfRange { .. } => "weight-range",
            NotRankOne(_) => "rank-one",
            ZeroElement(_) => "nonzero-element",
            Degenerate => "linear-independence",
            HardyInvariant(_) => "hardy-orthogonality",
            NoConvergence { .. } => "convergence",
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
