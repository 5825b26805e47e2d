//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building curve levels or evaluating
/// the analytic operations on them.
#[derive(Debug, Error)]
pub enum Error {
    /// Requested refinement level exceeds the configured depth limit.
    #[error("level {requested} exceeds the depth limit {limit}")]
    DepthLimitExceeded { requested: u32, limit: u32 },

    /// A chain or trapeze index outside its valid range.
    #[error("{what} index {index} out of range 1..={max}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },

    /// Two functions (or a function and a level) that were expected to live
    /// on the same vertex set do not.
    #[error("level mismatch: expected level {expected}, got {got}")]
    LevelMismatch { expected: u32, got: u32 },

    /// A vertex-function value vector whose length does not match its level.
    #[error("value vector has length {got}, level {level} requires {expected}")]
    WrongValueCount {
        level: u32,
        expected: usize,
        got: usize,
    },

    /// Measure weights must be positive and sum to one.
    #[error("invalid measure weights ({w1}, {w2}, {w3}): {reason}")]
    InvalidWeights {
        w1: f64,
        w2: f64,
        w3: f64,
        reason: &'static str,
    },

    /// Operation undefined at a chain endpoint.
    #[error("chain index {index} is an endpoint; the operation needs an interior vertex")]
    EndpointVertex { index: usize },

    /// Energy ratio of a constant function is undefined.
    #[error("energy ratio is undefined for a constant function")]
    ConstantFunction,

    /// A value outside the mathematical domain of a map.
    #[error("domain error in {op}: argument {value} not in {domain}")]
    OutOfDomain {
        op: &'static str,
        value: f64,
        domain: &'static str,
    },

    /// The proposed child eigenvalue is not a decimation branch of the parent.
    #[error(
        "eigenvalue {child} is not a decimation branch of {parent} (closure residual {residual:e})"
    )]
    BranchMismatch {
        parent: f64,
        child: f64,
        residual: f64,
    },

    /// Eigenfunction extension has a vanishing denominator at this eigenvalue.
    #[error("eigenfunction extension is singular at eigenvalue {lambda}")]
    ExtensionSingular { lambda: f64 },

    /// An internal geometric invariant failed to hold.
    #[error("geometry invariant violated: {detail}")]
    GeometryInvariant { detail: String },

    /// The bisection eigensolver failed to converge on a block.
    #[error("eigenvalue iteration did not converge on block {block}")]
    EigenNonConvergence { block: usize },

    /// Not enough data points for a least-squares fit.
    #[error("fit needs at least {needed} levels, got {got}")]
    InsufficientFitData { needed: usize, got: usize },

    /// A precondition on function values was violated.
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
}
