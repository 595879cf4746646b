//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building or checking operators,
/// relations, plans, and supports.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Two operands live on spaces of different dimension.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A construction would exceed the configured dimension cap.
    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    /// An operation over a family of operators received an empty family.
    #[error("operator list must be non-empty")]
    EmptyOperatorList,

    /// Self-adjointness certification failed.
    #[error("operator is not self-adjoint (residual {residual:.3e})")]
    NotSelfAdjoint { residual: f64 },

    /// Idempotence certification failed.
    #[error("operator is not idempotent (residual {residual:.3e})")]
    NotIdempotent { residual: f64 },

    /// An eigenvalue fell below the positivity tolerance.
    #[error("operator is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    /// A density operator candidate does not have unit trace.
    #[error("trace is not 1 (got {trace:.12})")]
    TraceNotUnit { trace: f64 },

    /// A state vector is not normalized.
    #[error("state vector is not normalized (norm {norm:.12})")]
    NotNormalized { norm: f64 },

    /// A relation or functional that requires commuting operands got a
    /// non-commuting pair.
    #[error("operators do not commute (commutator max-norm {residual:.3e})")]
    NonCommuting { residual: f64 },

    /// Conditioning event has probability zero under the given state.
    #[error("cannot condition on an event of probability {prob:.3e}")]
    ConditioningOnNull { prob: f64 },

    /// A family that must be pairwise orthogonal is not.
    #[error("projector family is not pairwise orthogonal (residual {residual:.3e})")]
    NotOrthogonalFamily { residual: f64 },

    /// A theorem check was invoked on operands that do not satisfy its
    /// hypothesis.
    #[error("required evaluation relation does not hold: {detail}")]
    RelationNotSatisfied { detail: String },

    /// A measurement plan contains a non-commuting pair of observables.
    #[error("plan observables '{first}' and '{second}' do not commute (residual {residual:.3e})")]
    NonCommutingPlan {
        first: String,
        second: String,
        residual: f64,
    },

    /// A plan or catalog gained the same observable name twice.
    #[error("duplicate observable '{name}'")]
    DuplicateObservable { name: String },

    /// A named observable is absent from a specimen or plan.
    #[error("observable '{name}' not present")]
    MissingObservable { name: String },

    /// Assigning a column that a specimen already carries.
    #[error("observable '{name}' already has an outcome")]
    ObservableAlreadyPresent { name: String },

    /// Evaluation and derivation may only read measured or derived columns.
    #[error("column '{name}' was itself evaluated and cannot seed further columns")]
    EvaluatedSource { name: String },

    /// An outcome value other than 0 or 1.
    #[error("outcome {value} is out of range for a two-valued observable")]
    OutcomeOutOfRange { value: u8 },

    /// A name that the catalog does not resolve.
    #[error("unknown observable '{name}'")]
    UnknownObservable { name: String },

    /// A plan would need a joint-outcome table too large to tabulate.
    #[error("plan of {len} observables exceeds the supported maximum {max}")]
    PlanTooLarge { len: usize, max: usize },

    /// Malformed support text.
    #[error("support parse error at line {line}: {message}")]
    ParseSupport { line: usize, message: String },
}
