use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("vector norm is {norm}, expected 1")]
    NotNormalized { norm: f64 },

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("logarithm requires full rank (min eigenvalue {min_eigenvalue:e})")]
    RequiresFullRank { min_eigenvalue: f64 },

    #[error("no witness exists: {0}")]
    NoWitness(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("all subsystems must be qubits")]
    NonQubitLayout,

    #[error("{symbols} local symbols exceed the brute-force budget of {max}")]
    SymbolBudget { symbols: usize, max: usize },

    #[error("invalid Pauli string: {0}")]
    InvalidPauli(String),

    #[error("real coefficients required (max imaginary part {max_imag:e})")]
    RealCoefficientsRequired { max_imag: f64 },

    #[error("matrix is not symmetric (max deviation {deviation:e})")]
    NotSymmetric { deviation: f64 },
}
