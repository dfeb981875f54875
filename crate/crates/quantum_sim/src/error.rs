//! Error type for the sparse simulator.

use thiserror::Error;
use zq_lattice::ZqError;

/// Result alias used throughout the crate.
pub type SimResult<T> = Result<T, SimError>;

/// Failures surfaced by state construction, evolution, and measurement.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    /// Squared norm drifted outside the tolerance around 1.
    #[error("state not normalized: |amp|^2 sums to {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    /// A basis label does not match the register layout.
    #[error("basis label has {got} registers, state has {expected}")]
    BasisShape { expected: usize, got: usize },
    /// A basis coordinate fell outside its register's modulus.
    #[error("coordinate {value} out of range for register modulus {modulus}")]
    CoordinateOutOfRange { value: u64, modulus: u64 },
    /// Two states disagree on register layout.
    #[error("register layouts differ")]
    LayoutMismatch,
    /// Support would exceed the materialization cap.
    #[error("support of {support} basis points exceeds cap {cap}")]
    SupportTooLarge { support: u128, cap: u128 },
    /// The window `2^r` does not fit inside Z_q.
    #[error("window 2^{r} does not fit in modulus {q}")]
    WindowTooLarge { r: u32, q: u64 },
    /// The parameter set derives no window exponent (`B_P < 2`).
    #[error("parameter set has no window exponent: B_P < 2")]
    MissingWindow,
    /// The preparation precondition fails and no override was requested.
    #[error("preparation precondition violated: q^2 eps^2 = {lhs:.4e} < {rhs:.4e}")]
    PreconditionViolated { lhs: f64, rhs: f64 },
    /// A basis relabeling collided (the map was not injective on support).
    #[error("basis map is not injective on the support")]
    BasisCollision,
    /// An operation needs a nonempty state.
    #[error("state has empty support")]
    EmptyState,
    /// A subspace oracle lookup missed.
    #[error("target is not a member of the admitted subspace")]
    NotInSubspace,
    /// Duplicate basis label supplied to a constructor.
    #[error("duplicate basis label in constructor input")]
    DuplicateBasis,
    /// Underlying integer-layer failure.
    #[error(transparent)]
    Lattice(#[from] ZqError),
}
