//! Error type for the interactive-round layer.

use quantum_sim::SimError;
use thiserror::Error;
use zq_lattice::ZqError;

/// Everything that can go wrong while running or replaying rounds.
#[derive(Debug, Error)]
pub enum ProtocolError {
    /// A state-machine method was called out of order.
    #[error("phase mismatch: expected {expected}, found {found}")]
    PhaseMismatch {
        /// Phase the call requires.
        expected: &'static str,
        /// Phase the machine is in.
        found: &'static str,
    },

    /// A message had the wrong shape for the pending challenge.
    #[error("malformed response: {detail}")]
    ResponseShape {
        /// What was wrong.
        detail: String,
    },

    /// A bit-vector argument had the wrong length.
    #[error("bit vector length {got}, expected {expected}")]
    BitLength {
        /// Required length.
        expected: usize,
        /// Observed length.
        got: usize,
    },

    /// A bit-vector argument held an entry other than 0 or 1.
    #[error("bit vector entry {value} is not a bit")]
    NotABit {
        /// Offending entry.
        value: u8,
    },

    /// The good-set membership test needs an even secret dimension.
    #[error("good-set index ranges need even n, got {n}")]
    OddDimension {
        /// Offending dimension.
        n: usize,
    },

    /// The prover cannot be rewound to its committed state.
    #[error("prover '{prover}' does not support snapshot/restore")]
    UnsupportedRewind {
        /// Prover name.
        prover: &'static str,
    },

    /// A transcript stream violated the wire format.
    #[error("transcript format: {detail}")]
    TranscriptFormat {
        /// What was wrong.
        detail: String,
    },

    /// Replaying a transcript produced a different verdict.
    #[error("replay mismatch at trial {trial}: {detail}")]
    ReplayMismatch {
        /// Trial whose verdict changed.
        trial: u64,
        /// Original vs replayed verdicts.
        detail: String,
    },

    /// Integer-layer failure.
    #[error(transparent)]
    Lattice(#[from] ZqError),

    /// Simulator failure.
    #[error(transparent)]
    Simulator(#[from] SimError),

    /// Serialization failure on the wire format.
    #[error(transparent)]
    Json(#[from] serde_json::Error),

    /// I/O failure while reading or writing transcript streams.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Shorthand result type.
pub type ProtocolResult<T> = Result<T, ProtocolError>;
