use thiserror::Error;

/// Failures raised by the algebra, basis, spectral, state and measurement layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 1")]
    EmptyDimension,

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("components must be finite (entry ({row}, {col}) is not)")]
    NonFinite { row: usize, col: usize },

    #[error("not Hermitian: max |z_jk - conj(z_kj)| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("not idempotent: ||J^2 - J|| = {deviation:e}")]
    NotIdempotent { deviation: f64 },

    #[error("projector is not elementary: trace = {trace}")]
    NotElementary { trace: f64 },

    #[error("not unitary: ||U U^dagger - 1|| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("family is not orthonormal: max Gram deviation = {deviation:e}")]
    NotOrthonormal { deviation: f64 },

    #[error("observables {first} and {second} do not commute: ||[A, B]|| = {deviation:e}")]
    NotCommuting {
        first: usize,
        second: usize,
        deviation: f64,
    },

    #[error("value {value} is not in the spectrum")]
    NotInSpectrum { value: f64 },

    #[error("input is the zero element")]
    ZeroInput,

    #[error("element {index} is linearly dependent on its predecessors")]
    LinearlyDependent { index: usize },

    #[error("element {index} is not in the eigenstate space (residual {residual:e})")]
    NotInSpan { index: usize, residual: f64 },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("element is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("observable is not a member of the labelling family")]
    NotInFamily,

    #[error("observable {index} is not diagonal on the eigenstate set (residual {residual:e})")]
    NotCompatible { index: usize, residual: f64 },

    #[error("family size {found} does not match dimension {expected}")]
    FamilySize { expected: usize, found: usize },

    #[error("lemma violated: ||IJI - I|| = {premise:e} but ||I - J|| = {conclusion:e}")]
    LemmaViolated { premise: f64, conclusion: f64 },
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
