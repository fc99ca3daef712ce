//! Error type shared by every module in the crate.

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A vector with norm below the conditioning threshold cannot be
    /// normalized.
    #[error("vector has vanishing norm")]
    ZeroVector,

    /// Two objects that must share a Hilbert-space dimension do not.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// States live in dimension 2 or higher.
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    /// An amplitude was NaN or infinite.
    #[error("amplitude is not finite")]
    NonFinite,

    /// Candidate projector matrix is not Hermitian.
    #[error("matrix is not Hermitian (max residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    /// Candidate projector matrix is not idempotent.
    #[error("matrix is not idempotent (max residual {residual:.3e})")]
    NotIdempotent { residual: f64 },

    /// Projector trace must be a whole number between 0 and the dimension.
    #[error("projector trace {trace} is not a whole number in [0, dim]")]
    InvalidTrace { trace: f64 },

    /// A PVM needs at least one element.
    #[error("PVM must contain at least one projector")]
    EmptyPvm,

    /// Two PVM elements overlap.
    #[error("PVM elements {i} and {j} are not orthogonal (residual {residual:.3e})")]
    PvmNotOrthogonal { i: usize, j: usize, residual: f64 },

    /// PVM elements do not sum to the identity.
    #[error("PVM does not resolve the identity (max residual {residual:.3e})")]
    PvmIncomplete { residual: f64 },

    /// The retrodiction denominator vanished: the post-selection is
    /// unreachable from every outcome of the setting.
    #[error("conditioning undefined: post-selection unreachable from every outcome")]
    UndefinedConditioning,

    /// Same as [`Error::UndefinedConditioning`], tagged with the offending
    /// setting index of a multi-setting assignment.
    #[error("conditioning undefined for setting {index}")]
    UndefinedConditioningAt { index: usize },

    /// A pair of projectors fed to a paradox check is not exclusive.
    #[error("projectors are not exclusive: tr(p1 p2) = {trace:.3e}")]
    NotExclusive { trace: f64 },

    /// Cycle length out of range.
    #[error("invalid cycle length {0}: must be odd and at least 5 (vector construction supports up to 15)")]
    InvalidN(usize),

    /// A probability outside [0, 1] was supplied.
    #[error("probability {0} outside [0, 1]")]
    OutOfRange(f64),

    /// Sequence length does not match the expected count.
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    /// Scan grid too coarse.
    #[error("grid too coarse: need theta_steps >= 2 and phi_steps >= 4")]
    InvalidGrid,

    /// No defined cell satisfies the exclusivity constraints.
    #[error("no defined cell satisfies the exclusivity constraints")]
    EmptyFeasibleSet,

    /// Every simulated trial failed post-selection.
    #[error("no trial passed post-selection")]
    NoAcceptedTrials,

    /// Simulation needs at least one trial.
    #[error("sample count must be at least 1")]
    NoSamples,

    /// An internal consistency check tripped; indicates a bug, not bad input.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
