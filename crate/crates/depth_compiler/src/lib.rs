//! Layered circuits with measured ancillas and classical corrections.
//!
//! This crate models circuits built from constant-depth quantum layers
//! interleaved with computational-basis measurements of a dedicated ancilla
//! register and GF(2)-linear reinitialization of that register:
//!
//! ```text
//! U_1 → measure → f_1 → U_2 → measure → f_2 → … → U_d
//! ```
//!
//! It provides structural validation (critical-path depth accounting, gate
//! basis checks, correction shapes), a dense statevector executor for up to
//! 22 qubits with both sampled and exhaustively-branched semantics, a
//! constant-depth measured compilation of unbounded fanout together with its
//! linear-depth reference ladder, and a modeled compilation of modular linear
//! register updates as opaque layer gates with exact action tables.

mod circuit;
mod error;
mod exec;
mod fanout;
mod gate;
mod linear_map;

pub use circuit::{
    critical_path_depth, depth_report, xor_tree_depth, ClassicalCorrection, DepthReport,
    GateBasis, Layer, LayeredCircuit, QuantumLayer,
};
pub use error::{DepthError, DepthResult};
pub use exec::{
    fidelity, run_all_branches, run_layered, Branch, RunRecord, BRANCH_PROBABILITY_FLOOR,
    NORM_TOLERANCE, QUBIT_CAP,
};
pub use fanout::{compile_fanout, reference_fanout};
pub use gate::{check_unitary, GateOp, OpaqueLayerGate, UNITARITY_TOLERANCE};
pub use linear_map::{compile_linear_map_modeled, MODELED_ARITHMETIC_DEPTH};
