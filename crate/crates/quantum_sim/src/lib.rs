//! Exact sparse-statevector simulation of the prover's quantum steps.
//!
//! The prover's side of the interactive test needs only a narrow family of
//! states: uniform superpositions over Z_q registers, shift-tolerant window
//! states, and their image under the basis permutation
//! `|b, x, z> -> |b, x, z + A x + b u>`. All of these are sparse and carry
//! real amplitudes, so this crate simulates them exactly with a map from
//! basis labels to `f64` amplitudes instead of a dense register.
//!
//! The pieces:
//!
//! - [`SparseState`]: normalized real-amplitude states over heterogeneous
//!   Z_q registers, with deterministic (lexicographic) iteration order.
//! - [`create_robust_state`] / [`overlap_shifted`]: the window
//!   superposition and its behaviour under small shifts, with the
//!   closed-form overlap alongside the simulated one.
//! - [`prepare_phi`]: the committed superposition over `(b, x, z)` with an
//!   exact rational [`ErrorBudget`] standing in for the constant-depth
//!   uniform-register preparation the simulator does not model at gate
//!   level.
//! - Born-rule measurements ([`measure_last_register`],
//!   [`measure_committed_basis`]) and the bitwise [`hadamard_measure`],
//!   each with its exact distribution exposed for cross-checking.
//! - [`SubspaceOracle`]: a brute-force enumeration of the claw subspace
//!   spanned by `(|0, x_y> + |1, x_y - s>)/sqrt(2) |y>`, giving an exact
//!   distance metric for prepared states. It requires the secret and
//!   exists purely for verification.

pub mod error;
pub mod measure;
pub mod oracle;
pub mod prepare;
pub mod robust;
pub mod state;

pub use error::{SimError, SimResult};
pub use measure::{
    born_distribution, hadamard_distribution, hadamard_measure, measure_committed_basis,
    measure_last_register, measure_prefix, measure_registers, measure_suffix, MeasurementRecord,
};
pub use oracle::SubspaceOracle;
pub use prepare::{apply_lwe_map, prepare_phi, uniform_q_superposition, ErrorBudget};
pub use robust::{
    check_bounded, check_bounded_from, closed_form_overlap, create_robust_state,
    overlap_lower_bound, overlap_shifted, shift_state,
};
pub use state::{SparseState, NORM_TOLERANCE, SUPPORT_CAP};
