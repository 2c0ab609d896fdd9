//! Numerical workbench for sequence spaces built from a functional sequence.
//!
//! Given a finite family of functionals `g_i` on a (weighted) Euclidean
//! space, the library computes the infimum norm
//!
//! ```text
//!   |||c||| = inf { ||f||_s : |c_i| <= |g_i(f)| for all i }
//! ```
//!
//! both by a closed form available for block-repetition frames and by an
//! independent brute-force minimizer, checks the structural conditions
//! (A1)-(A3) that govern when the resulting space is a solid BK/CB space
//! and when `{g_i}` is a frame, and certifies the synthesis operator built
//! from an explicit dual family.

pub mod conditions;
pub mod config;
pub mod frame;
pub mod hierarchy;
pub mod linalg;
pub mod oracle;
pub mod reconstruct;
pub mod seq;
pub mod theta;

pub use conditions::{assemble_verdicts, ConditionReport, VerdictConfig};
pub use config::RunConfig;
pub use frame::{BlockFrameSpec, FrameSpec, GeneralFrameSpec};
pub use hierarchy::WeightHierarchy;
pub use reconstruct::DualFamily;
pub use seq::ScalarSequence;
pub use theta::{Method, ThetaNormResult};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid lp exponent {0}; need p >= 1 or infinity")]
    InvalidExponent(f64),
    #[error("non-finite entry at index {0}")]
    NonFinite(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("zero scalar t at position {0}; every functional must be nonzero")]
    ZeroScalar(usize),
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("matrix row {0} is zero; every functional must be nonzero")]
    ZeroRow(usize),
    #[error("invalid weight table: {0}")]
    InvalidWeights(String),
    #[error("level {0} out of range")]
    LevelOutOfRange(usize),
    #[error("functional index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("closed form requires a block frame")]
    ClosedFormRequiresBlock,
    #[error("oracle size limit exceeded: {0}")]
    OracleLimit(String),
    #[error("projection iteration cap exceeded without convergence")]
    IterationCap,
    #[error("internal: every sign pattern infeasible")]
    AllPatternsInfeasible,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
