//! Error type shared across the toolkit.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        context: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entries encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("eigendecomposition failed to converge after {sweeps} Jacobi sweeps")]
    EigenNonConvergence { sweeps: usize },

    #[error("not a density operator: {reason}")]
    InvalidDensity { reason: String },

    #[error("independence tolerance must lie in (0, 1), got {value}")]
    InvalidTolerance { value: f64 },

    #[error("at least one generator is required")]
    EmptyGenerators,

    #[error("invariant form requires even dimension, got {dim}")]
    OddDimension { dim: usize },

    #[error("invalid block system: {reason}")]
    InvalidBlockSystem { reason: String },

    #[error("block index {index} out of range for {count} blocks")]
    BlockIndexOutOfRange { index: usize, count: usize },

    #[error("composite dimension {dim} exceeds the supported limit {limit}")]
    SystemTooLarge { dim: usize, limit: usize },

    #[error("invalid pulse: {reason}")]
    InvalidPulse { reason: String },

    #[error("pulse supplies {found} control channels but the system has {expected}")]
    ControlCountMismatch { expected: usize, found: usize },

    #[error("trace drift {drift:.3e} in block {block} at step {step} exceeds the 1e-6 abort threshold")]
    TraceDrift { step: usize, block: usize, drift: f64 },

    #[error("rotating-wave propagation requires two-level blocks and a carrier frequency: {reason}")]
    RotatingWaveUnsupported { reason: String },

    #[error("mixing angle {value} outside [0, pi/2]")]
    MixingAngleOutOfRange { value: f64 },

    #[error("invalid objective: {reason}")]
    InvalidObjective { reason: String },

    #[error("optimizer aborted at iteration {iteration}: {reason}")]
    OptimizerAbort { iteration: usize, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("interacting (tensor-product) systems are not supported; this toolkit handles decomposable direct-sum ensembles only")]
    InteractingSystemUnsupported,

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
