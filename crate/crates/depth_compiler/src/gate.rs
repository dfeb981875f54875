//! Gate vocabulary for layered circuits.
//!
//! Two gate families are distinguished:
//!
//! ```text
//! restricted basis   {H, T, CNOT}
//! full basis         all 1-qubit unitaries plus CNOT
//! ```
//!
//! plus *opaque layer gates*: multi-qubit primitives (modular arithmetic,
//! threshold-gate constructions) whose internal decomposition is out of scope.
//! An opaque gate carries a declared depth and error as configuration metadata
//! together with an exact action table — a permutation of its sub-register's
//! basis states with optional unit phases — so executions stay exact even
//! though the gate's internals are not expanded.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{DepthError, DepthResult};

/// Tolerance for unitarity and unit-modulus checks on declared matrices.
pub const UNITARITY_TOLERANCE: f64 = 1e-9;

/// A multi-qubit primitive modeled by its exact basis action instead of gates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpaqueLayerGate {
    /// Human-readable name of the modeled primitive.
    pub label: String,
    /// Qubits the gate acts on; bit `j` of a table index is `qubits[j]`.
    pub qubits: Vec<usize>,
    /// Declared depth of the modeled decomposition (configuration metadata).
    pub declared_depth: u32,
    /// Declared approximation error of the modeled decomposition.
    pub declared_error: f64,
    /// Image of each sub-register basis index; must be a bijection.
    pub permutation: Vec<u64>,
    /// Optional unit phase attached to each source basis index.
    pub phases: Option<Vec<Complex64>>,
}

/// A single gate application inside a quantum layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GateOp {
    /// Hadamard gate.
    H { qubit: usize },
    /// π/8 phase gate, `diag(1, e^{iπ/4})`.
    T { qubit: usize },
    /// Phase gate, `diag(1, i)`.
    S { qubit: usize },
    /// Bit flip.
    X { qubit: usize },
    /// Phase flip.
    Z { qubit: usize },
    /// Arbitrary declared 1-qubit unitary, `matrix[row][col]`.
    Unitary { qubit: usize, matrix: [[Complex64; 2]; 2] },
    /// Controlled NOT.
    Cnot { control: usize, target: usize },
    /// Modeled multi-qubit primitive with an exact action table.
    Opaque(OpaqueLayerGate),
}

impl GateOp {
    /// Short display name used in reports and basis-violation messages.
    pub fn name(&self) -> String {
        match self {
            GateOp::H { .. } => "H".into(),
            GateOp::T { .. } => "T".into(),
            GateOp::S { .. } => "S".into(),
            GateOp::X { .. } => "X".into(),
            GateOp::Z { .. } => "Z".into(),
            GateOp::Unitary { .. } => "UNITARY".into(),
            GateOp::Cnot { .. } => "CNOT".into(),
            GateOp::Opaque(gate) => format!("OPAQUE[{}]", gate.label),
        }
    }

    /// Qubits touched by the gate, in declaration order.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            GateOp::H { qubit }
            | GateOp::T { qubit }
            | GateOp::S { qubit }
            | GateOp::X { qubit }
            | GateOp::Z { qubit }
            | GateOp::Unitary { qubit, .. } => vec![*qubit],
            GateOp::Cnot { control, target } => vec![*control, *target],
            GateOp::Opaque(gate) => gate.qubits.clone(),
        }
    }

    /// Depth the gate contributes along its critical path.
    pub fn duration(&self) -> u32 {
        match self {
            GateOp::Opaque(gate) => gate.declared_depth,
            _ => 1,
        }
    }

    /// Checks index bounds, duplicate qubits, unitarity, and action tables.
    pub fn validate(&self, total_qubits: usize) -> DepthResult<()> {
        let qubits = self.qubits();
        for &qubit in &qubits {
            if qubit >= total_qubits {
                return Err(DepthError::QubitOutOfRange { qubit, total: total_qubits });
            }
        }
        let mut seen = qubits.clone();
        seen.sort_unstable();
        for pair in seen.windows(2) {
            if pair[0] == pair[1] {
                return Err(DepthError::DuplicateQubit { qubit: pair[0] });
            }
        }
        match self {
            GateOp::Unitary { matrix, .. } => check_unitary(matrix),
            GateOp::Opaque(gate) => gate.validate(),
            _ => Ok(()),
        }
    }

    /// The 2×2 matrix of a 1-qubit gate, if the gate is 1-qubit.
    pub fn single_qubit_matrix(&self) -> Option<[[Complex64; 2]; 2]> {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match self {
            GateOp::H { .. } => {
                let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
                Some([[h, h], [h, -h]])
            }
            GateOp::T { .. } => {
                let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
                Some([[one, zero], [zero, phase]])
            }
            GateOp::S { .. } => Some([[one, zero], [zero, Complex64::new(0.0, 1.0)]]),
            GateOp::X { .. } => Some([[zero, one], [one, zero]]),
            GateOp::Z { .. } => Some([[one, zero], [zero, -one]]),
            GateOp::Unitary { matrix, .. } => Some(*matrix),
            _ => None,
        }
    }
}

impl OpaqueLayerGate {
    /// Checks the action table is a bijection with unit phases and sane depth.
    pub fn validate(&self) -> DepthResult<()> {
        if self.qubits.is_empty() {
            return Err(DepthError::BadOpaqueAction { detail: "gate acts on no qubits".into() });
        }
        if self.declared_depth == 0 {
            return Err(DepthError::BadOpaqueAction { detail: "declared depth must be positive".into() });
        }
        if self.qubits.len() >= 64 {
            return Err(DepthError::BadOpaqueAction {
                detail: format!("action table over {} qubits is not representable", self.qubits.len()),
            });
        }
        let size = 1usize << self.qubits.len();
        if self.permutation.len() != size {
            return Err(DepthError::BadOpaqueAction {
                detail: format!("permutation has {} entries, expected {}", self.permutation.len(), size),
            });
        }
        let mut hit = vec![false; size];
        for &image in &self.permutation {
            let image = image as usize;
            if image >= size || hit[image] {
                return Err(DepthError::BadOpaqueAction {
                    detail: format!("permutation is not a bijection at image {image}"),
                });
            }
            hit[image] = true;
        }
        if let Some(phases) = &self.phases {
            if phases.len() != size {
                return Err(DepthError::BadOpaqueAction {
                    detail: format!("phase table has {} entries, expected {}", phases.len(), size),
                });
            }
            for phase in phases {
                if (phase.norm() - 1.0).abs() > UNITARITY_TOLERANCE {
                    return Err(DepthError::BadOpaqueAction {
                        detail: format!("phase {phase} does not have unit modulus"),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Verifies `U†U = I` within [`UNITARITY_TOLERANCE`].
pub fn check_unitary(matrix: &[[Complex64; 2]; 2]) -> DepthResult<()> {
    let mut deviation: f64 = 0.0;
    for row in 0..2 {
        for col in 0..2 {
            let mut dot = Complex64::new(0.0, 0.0);
            for k in 0..2 {
                dot += matrix[k][row].conj() * matrix[k][col];
            }
            let expected = if row == col { 1.0 } else { 0.0 };
            deviation = deviation.max((dot - expected).norm());
        }
    }
    if deviation > UNITARITY_TOLERANCE {
        return Err(DepthError::NotUnitary { deviation });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    // ---------------------------------------------------------------- bounds

    #[test]
    fn gates_reject_out_of_range_and_duplicate_qubits() {
        let gate = GateOp::H { qubit: 3 };
        assert!(
            matches!(gate.validate(3), Err(DepthError::QubitOutOfRange { qubit: 3, total: 3 })),
            "H on qubit 3 of a 3-qubit register must be out of range"
        );
        let gate = GateOp::Cnot { control: 1, target: 1 };
        assert!(
            matches!(gate.validate(3), Err(DepthError::DuplicateQubit { qubit: 1 })),
            "CNOT with control == target must be rejected"
        );
    }

    // ------------------------------------------------------------- unitarity

    #[test]
    fn named_gates_are_unitary_and_custom_matrices_are_checked() {
        for gate in [
            GateOp::H { qubit: 0 },
            GateOp::T { qubit: 0 },
            GateOp::S { qubit: 0 },
            GateOp::X { qubit: 0 },
            GateOp::Z { qubit: 0 },
        ] {
            let matrix = gate.single_qubit_matrix().expect("named gates are 1-qubit");
            check_unitary(&matrix).expect("named gate matrices must be unitary");
        }
        let shrunk = [
            [Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)],
        ];
        assert!(
            matches!(
                GateOp::Unitary { qubit: 0, matrix: shrunk }.validate(1),
                Err(DepthError::NotUnitary { .. })
            ),
            "a contraction matrix must fail the unitarity check"
        );
    }

    // ---------------------------------------------------------- opaque gates

    #[test]
    fn opaque_tables_must_be_bijections_with_unit_phases() {
        let base = OpaqueLayerGate {
            label: "probe".into(),
            qubits: vec![0, 1],
            declared_depth: 2,
            declared_error: 0.0,
            permutation: vec![0, 1, 2, 3],
            phases: None,
        };
        base.validate().expect("identity table is a valid action");

        let mut collided = base.clone();
        collided.permutation = vec![0, 0, 2, 3];
        assert!(
            matches!(collided.validate(), Err(DepthError::BadOpaqueAction { .. })),
            "a colliding table must be rejected"
        );

        let mut short = base.clone();
        short.permutation = vec![0, 1];
        assert!(
            matches!(short.validate(), Err(DepthError::BadOpaqueAction { .. })),
            "a short table must be rejected"
        );

        let mut dull = base.clone();
        dull.phases = Some(vec![Complex64::new(0.5, 0.0); 4]);
        assert!(
            matches!(dull.validate(), Err(DepthError::BadOpaqueAction { .. })),
            "non-unit phases must be rejected"
        );

        let mut flat = base;
        flat.declared_depth = 0;
        assert!(
            matches!(flat.validate(), Err(DepthError::BadOpaqueAction { .. })),
            "zero declared depth must be rejected"
        );
    }

    // ----------------------------------------------------------------- serde

    #[test]
    fn gate_ops_round_trip_through_json() {
        let gates = vec![
            GateOp::H { qubit: 0 },
            GateOp::Cnot { control: 1, target: 2 },
            GateOp::Opaque(OpaqueLayerGate {
                label: "add".into(),
                qubits: vec![0, 2],
                declared_depth: 3,
                declared_error: 0.25,
                permutation: vec![1, 0, 3, 2],
                phases: None,
            }),
        ];
        let text = serde_json::to_string(&gates).expect("gates serialize");
        let back: Vec<GateOp> = serde_json::from_str(&text).expect("gates deserialize");
        assert_eq!(back, gates, "JSON round trip must preserve every gate field");
    }
}
