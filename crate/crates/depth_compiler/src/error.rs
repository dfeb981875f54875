//! Error taxonomy for layered-circuit construction, validation, and execution.

use thiserror::Error;

/// Errors raised while building, validating, or executing layered circuits.
#[derive(Debug, Error)]
pub enum DepthError {
    /// A gate references a qubit index outside the circuit's register.
    #[error("qubit {qubit} out of range for a register of {total} qubits")]
    QubitOutOfRange { qubit: usize, total: usize },
    /// A gate lists the same qubit more than once.
    #[error("gate uses qubit {qubit} more than once")]
    DuplicateQubit { qubit: usize },
    /// Dense execution refuses registers beyond the simulation cap.
    #[error("register of {qubits} qubits exceeds the dense-execution cap of {cap}")]
    TooManyQubits { qubits: usize, cap: usize },
    /// A declared 1-qubit matrix deviates from unitarity beyond tolerance.
    #[error("1-qubit matrix deviates from unitarity by {deviation:.3e}")]
    NotUnitary { deviation: f64 },
    /// An opaque gate's declared action table is malformed.
    #[error("malformed opaque gate action: {detail}")]
    BadOpaqueAction { detail: String },
    /// Declared depth disagrees with the recomputed critical path.
    #[error("declared depth {declared} differs from computed critical path {computed}")]
    DepthMismatch { declared: u32, computed: u32 },
    /// A gate lies outside the circuit's declared gate basis.
    #[error("gate {gate} is not admitted by the declared basis {basis}")]
    BasisViolation { gate: String, basis: String },
    /// A correction matrix or offset has the wrong shape for the measured register.
    #[error("correction shape mismatch: expected {expected} entries, got {got}")]
    CorrectionShape { expected: usize, got: usize },
    /// A correction matrix or offset entry is not a GF(2) value.
    #[error("correction entry {value} is not a bit")]
    CorrectionEntry { value: u8 },
    /// A correction layer does not immediately follow a measurement layer.
    #[error("correction layer must immediately follow a measurement layer")]
    CorrectionWithoutMeasurement,
    /// A measurement layer was declared on a circuit with no measured qubits.
    #[error("measurement layer declared but the circuit has no measured qubits")]
    NothingToMeasure,
    /// The input state has the wrong length for the persistent register.
    #[error("input state has {got} amplitudes but the persistent register needs {expected}")]
    InputSize { expected: usize, got: usize },
    /// The input state is not normalized within tolerance.
    #[error("input state squared norm {norm_sq} is not 1 within tolerance")]
    NotNormalized { norm_sq: f64 },
    /// Moduli disagree between a matrix and the requested register.
    #[error("modulus mismatch: expected {expected}, got {got}")]
    ModulusMismatch { expected: u64, got: u64 },
}

/// Convenient alias for fallible circuit operations.
pub type DepthResult<T> = Result<T, DepthError>;
