use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |m - m^dagger| = {deviation:.3e} exceeds {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("vectors are linearly dependent: Gram determinant {determinant:.3e} below {tol:.3e}")]
    RankDeficient { determinant: f64, tol: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("channel is not trace preserving: ||sum E^dagger E - I||_F = {residual:.3e} exceeds {tol:.3e}")]
    NotTracePreserving { residual: f64, tol: f64 },

    #[error("channel has no Kraus operators")]
    EmptyChannel,

    #[error("input ensemble is empty")]
    EmptyEnsemble,

    #[error("not a density operator: {0}")]
    NotDensityOperator(String),

    #[error("state is not normalized: norm {norm:.12}")]
    NotNormalized { norm: f64 },

    #[error("not a valid measurement: {0}")]
    InvalidMeasurement(String),

    #[error("outcome groups do not partition 0..{outcomes}: {reason}")]
    NotAPartition { outcomes: usize, reason: String },

    #[error("probability {value:.3e} is negative beyond round-off")]
    NegativeProbability { value: f64 },

    #[error("product graph would have {vertices} vertices, cap is {cap}")]
    SizeCapExceeded { vertices: u128, cap: usize },

    #[error("parameter {name} = {value} outside {range}")]
    ParameterOutOfRange {
        name: String,
        value: f64,
        range: String,
    },

    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
