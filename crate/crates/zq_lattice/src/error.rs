//! Error type shared by the integer layer.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type ZqResult<T> = Result<T, ZqError>;

/// Failures surfaced by vector arithmetic, sampling, and inversion.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZqError {
    /// Modulus outside the supported range `[2, 2^40]`.
    #[error("modulus {0} outside supported range [2, 2^40]")]
    InvalidModulus(u64),
    /// Two operands carry different moduli.
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    /// Operand lengths or shapes disagree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    /// A canonical entry fell outside `[0, q)`.
    #[error("entry {value} out of range for modulus {q}")]
    EntryOutOfRange { value: u64, q: u64 },
    /// A matrix was built from an entry buffer of the wrong length.
    #[error("shape {rows}x{cols} cannot hold {len} entries")]
    ShapeMismatch { rows: usize, cols: usize, len: usize },
    /// Trapdoor generation needs `m >= n*ceil(log2 q) + 1`.
    #[error("trapdoor shape unsupported: n={n}, m={m}, q={q} needs m >= n*ceil(log2 q) + 1")]
    TrapdoorShape { n: usize, m: usize, q: u64 },
    /// Inversion produced a candidate whose residual exceeds the radius.
    #[error("inversion failed: no preimage within the decoding radius")]
    InversionFailed,
    /// Two candidate preimages fit within the decoding radius.
    #[error("ambiguous preimage: two candidates within the decoding radius")]
    AmbiguousPreimage,
    /// A brute-force enumeration would exceed the hard cap.
    #[error("enumeration of {count} candidates exceeds cap {cap}")]
    EnumerationTooLarge { count: u128, cap: u128 },
    /// Gaussian width incompatible with the modulus.
    #[error("noise bound {b} incompatible with modulus {q}")]
    BadNoiseBound { b: f64, q: u64 },
    /// A parameter failed basic validation.
    #[error("parameter {name} out of range: {detail}")]
    BadParameter { name: &'static str, detail: String },
    /// An exact rational computation overflowed 128-bit intermediates.
    #[error("exact rational arithmetic overflowed in {0}")]
    RatioOverflow(&'static str),
}
