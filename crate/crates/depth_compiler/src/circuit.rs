//! The layered circuit model: constant-depth quantum layers interleaved with
//! measurements of a fixed ancilla register and classical GF(2) corrections.
//!
//! A circuit acts on `r1 + r2` qubits:
//!
//! ```text
//! qubits 0 .. r1        measured-and-reset register (ancillas)
//! qubits r1 .. r1+r2    persistent register (data)
//!
//! execution    U_1, measure, f_1, U_2, measure, f_2, ..., U_d
//! ```
//!
//! Each measurement reads the full ancilla register; the following correction
//! reinitializes it to `|f(outcome)⟩` where `f` is a GF(2)-linear map with an
//! optional affine offset.  Declared quantum depths must equal the recomputed
//! critical path (as-soon-as-possible schedule over qubit conflicts), and
//! declared classical depths must equal the XOR-tree depth of the widest row.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{DepthError, DepthResult};
use crate::gate::GateOp;

/// Gate families a circuit may declare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateBasis {
    /// `{H, T, CNOT}` only.
    Restricted,
    /// Every 1-qubit unitary plus CNOT.
    Full,
    /// [`GateBasis::Full`] plus opaque modeled primitives.
    Modeled,
}

impl GateBasis {
    /// Whether the basis admits the given gate.
    pub fn admits(&self, gate: &GateOp) -> bool {
        match (self, gate) {
            (GateBasis::Restricted, GateOp::H { .. } | GateOp::T { .. } | GateOp::Cnot { .. }) => true,
            (GateBasis::Restricted, _) => false,
            (GateBasis::Full, GateOp::Opaque(_)) => false,
            (GateBasis::Full, _) => true,
            (GateBasis::Modeled, _) => true,
        }
    }

    /// Display name used in diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            GateBasis::Restricted => "restricted",
            GateBasis::Full => "full",
            GateBasis::Modeled => "modeled",
        }
    }
}

/// One constant-depth block of gates applied between measurements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumLayer {
    /// Gates in program order; qubit conflicts induce the schedule.
    pub gates: Vec<GateOp>,
    /// Declared parallel depth; must equal the recomputed critical path.
    pub declared_depth: u32,
}

impl QuantumLayer {
    /// Builds a layer whose declared depth is its computed critical path.
    pub fn new(gates: Vec<GateOp>) -> Self {
        let declared_depth = critical_path_depth(&gates);
        QuantumLayer { gates, declared_depth }
    }
}

/// GF(2)-linear reinitialization map applied to the measured register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalCorrection {
    /// Row `i` lists which outcome bits XOR into reinitialized bit `i`.
    pub matrix: Vec<Vec<u8>>,
    /// Optional affine offset XORed onto the result.
    pub offset: Option<Vec<u8>>,
    /// Declared classical depth; must equal the widest row's XOR-tree depth.
    pub declared_depth: u32,
}

impl ClassicalCorrection {
    /// Builds a correction whose declared depth is its computed XOR-tree depth.
    pub fn new(matrix: Vec<Vec<u8>>, offset: Option<Vec<u8>>) -> Self {
        let declared_depth = xor_tree_depth(&matrix, offset.as_deref());
        ClassicalCorrection { matrix, offset, declared_depth }
    }

    /// Applies the map to a measured outcome, bit `i` = qubit `i`.
    pub fn apply(&self, outcome: &[u8]) -> Vec<u8> {
        let mut image = vec![0u8; self.matrix.len()];
        for (row, slot) in self.matrix.iter().zip(image.iter_mut()) {
            for (&coefficient, &bit) in row.iter().zip(outcome.iter()) {
                *slot ^= coefficient & bit;
            }
        }
        if let Some(offset) = &self.offset {
            for (slot, &bit) in image.iter_mut().zip(offset.iter()) {
                *slot ^= bit;
            }
        }
        image
    }
}

/// One stage of a layered circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Layer {
    /// Apply a block of gates.
    Quantum(QuantumLayer),
    /// Measure the full ancilla register in the computational basis.
    Measure,
    /// Reinitialize the ancilla register from the latest outcome.
    Correction(ClassicalCorrection),
}

/// A circuit in the measured-layer model, immutable after construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayeredCircuit {
    /// Number of measured-and-reset qubits (ancillas, low indices).
    pub r1: usize,
    /// Number of persistent qubits (data, high indices).
    pub r2: usize,
    /// Gate family every quantum layer must stay within.
    pub basis: GateBasis,
    /// Stages in execution order.
    pub layers: Vec<Layer>,
}

impl LayeredCircuit {
    /// Total register width `r1 + r2`.
    pub fn total_qubits(&self) -> usize {
        self.r1 + self.r2
    }

    /// Structural validation: bounds, basis membership, declared depths,
    /// correction shapes, and layer ordering.
    pub fn validate(&self) -> DepthResult<()> {
        let total = self.total_qubits();
        let mut after_measure = false;
        for layer in &self.layers {
            match layer {
                Layer::Quantum(block) => {
                    for gate in &block.gates {
                        gate.validate(total)?;
                        if !self.basis.admits(gate) {
                            return Err(DepthError::BasisViolation {
                                gate: gate.name(),
                                basis: self.basis.name().into(),
                            });
                        }
                    }
                    let computed = critical_path_depth(&block.gates);
                    if computed != block.declared_depth {
                        return Err(DepthError::DepthMismatch {
                            declared: block.declared_depth,
                            computed,
                        });
                    }
                    after_measure = false;
                }
                Layer::Measure => {
                    if self.r1 == 0 {
                        return Err(DepthError::NothingToMeasure);
                    }
                    after_measure = true;
                }
                Layer::Correction(correction) => {
                    if !after_measure {
                        return Err(DepthError::CorrectionWithoutMeasurement);
                    }
                    validate_correction(correction, self.r1)?;
                    after_measure = false;
                }
            }
        }
        Ok(())
    }
}

/// Critical-path depth of a gate list under as-soon-as-possible scheduling.
pub fn critical_path_depth(gates: &[GateOp]) -> u32 {
    let mut free_at: BTreeMap<usize, u32> = BTreeMap::new();
    let mut makespan = 0;
    for gate in gates {
        let qubits = gate.qubits();
        let start = qubits.iter().map(|q| free_at.get(q).copied().unwrap_or(0)).max().unwrap_or(0);
        let finish = start + gate.duration();
        for qubit in qubits {
            free_at.insert(qubit, finish);
        }
        makespan = makespan.max(finish);
    }
    makespan
}

/// Depth of a balanced XOR tree over the widest correction row.
pub fn xor_tree_depth(matrix: &[Vec<u8>], offset: Option<&[u8]>) -> u32 {
    let mut depth = 0;
    for (index, row) in matrix.iter().enumerate() {
        let mut weight = row.iter().filter(|&&bit| bit == 1).count();
        if let Some(offset) = offset {
            if offset.get(index).copied().unwrap_or(0) == 1 {
                weight += 1;
            }
        }
        if weight > 1 {
            depth = depth.max((weight as u64).next_power_of_two().trailing_zeros());
        }
    }
    depth
}

fn validate_correction(correction: &ClassicalCorrection, r1: usize) -> DepthResult<()> {
    if correction.matrix.len() != r1 {
        return Err(DepthError::CorrectionShape { expected: r1, got: correction.matrix.len() });
    }
    for row in &correction.matrix {
        if row.len() != r1 {
            return Err(DepthError::CorrectionShape { expected: r1, got: row.len() });
        }
        for &entry in row {
            if entry > 1 {
                return Err(DepthError::CorrectionEntry { value: entry });
            }
        }
    }
    if let Some(offset) = &correction.offset {
        if offset.len() != r1 {
            return Err(DepthError::CorrectionShape { expected: r1, got: offset.len() });
        }
        for &entry in offset {
            if entry > 1 {
                return Err(DepthError::CorrectionEntry { value: entry });
            }
        }
    }
    let computed = xor_tree_depth(&correction.matrix, correction.offset.as_deref());
    if computed != correction.declared_depth {
        return Err(DepthError::DepthMismatch { declared: correction.declared_depth, computed });
    }
    Ok(())
}

/// Structural summary of a layered circuit's depth resources.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthReport {
    /// Number of quantum layers.
    pub num_layers: usize,
    /// Largest critical-path depth among the quantum layers.
    pub max_quantum_depth: u32,
    /// Largest XOR-tree depth among the classical corrections.
    pub max_classical_depth: u32,
    /// Register width `r1 + r2`.
    pub total_qubits: usize,
    /// Measured-and-reset register width.
    pub measured_qubits: usize,
    /// Persistent register width.
    pub persistent_qubits: usize,
    /// Gate applications by display name.
    pub gate_counts: BTreeMap<String, usize>,
}

/// Validates the circuit and summarizes its depth resources.
pub fn depth_report(circuit: &LayeredCircuit) -> DepthResult<DepthReport> {
    circuit.validate()?;
    let mut report = DepthReport {
        num_layers: 0,
        max_quantum_depth: 0,
        max_classical_depth: 0,
        total_qubits: circuit.total_qubits(),
        measured_qubits: circuit.r1,
        persistent_qubits: circuit.r2,
        gate_counts: BTreeMap::new(),
    };
    for layer in &circuit.layers {
        match layer {
            Layer::Quantum(block) => {
                report.num_layers += 1;
                report.max_quantum_depth = report.max_quantum_depth.max(block.declared_depth);
                for gate in &block.gates {
                    *report.gate_counts.entry(gate.name()).or_insert(0) += 1;
                }
            }
            Layer::Measure => {}
            Layer::Correction(correction) => {
                report.max_classical_depth = report.max_classical_depth.max(correction.declared_depth);
            }
        }
    }
    Ok(report)
}
