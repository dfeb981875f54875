//! Measurement-assisted compilation of unbounded fanout.
//!
//! The target is the XOR-spray of the first data qubit onto all others,
//!
//! ```text
//! |x₁, x₂, …, x_m⟩ → |x₁, x₂⊕x₁, …, x_m⊕x₁⟩,
//! ```
//!
//! whose direct realization is a linear-depth CNOT ladder
//! ([`reference_fanout`]).  The compiled form replaces the ladder with two
//! constant-depth layers around one ancilla measurement:
//!
//! ```text
//! carriers  C₁ … C_{m−2}   one per late data qubit D₃ … D_m
//! checkers  Q₁ … Q_{m−3}   parity probes between adjacent carriers
//!
//! layer 1   C₁ copies D₁; the other carriers start uniform; each checker
//!           takes C_j ⊕ C_{j+1}; each carrier XORs into its data qubit;
//!           carriers finish in the conjugate basis
//! measure   checkers read p_j = C_j ⊕ C_{j+1}, carriers read h_j
//! correct   slot 1 ← h₁⊕…⊕h_{m−2} (phase fix), slot j ← p₁⊕…⊕p_{j−1}
//! layer 2   X onto D₄ … D_m from the prefix parities; the phase fix lands
//!           on D₁ as a conjugated flip
//! ```
//!
//! Within each branch the carrier values satisfy `C_j = x₁ ⊕ p₁ ⊕ … ⊕ p_{j−1}`,
//! so data qubit `D_{j+2}` holds `x_{j+2} ⊕ x₁` up to the prefix parity that
//! the correction cancels, and the conjugate-basis readout of the carriers
//! leaves only the `(−1)^{x₁·(h₁⊕…⊕h_{m−2})}` phase that the conjugated flip
//! on `D₁` removes.  Every measurement branch therefore yields the same final
//! state, which the equivalence tests check against the ladder.

use num_complex::Complex64;

use crate::circuit::{ClassicalCorrection, GateBasis, Layer, LayeredCircuit, QuantumLayer};
use crate::exec::apply_cnot;
use crate::gate::GateOp;

/// Compiles fanout over `m` data qubits into a two-layer measured circuit.
pub fn compile_fanout(m: usize) -> LayeredCircuit {
    assert!(m >= 1, "fanout needs at least one data qubit");
    if m == 1 {
        return LayeredCircuit { r1: 0, r2: 1, basis: GateBasis::Restricted, layers: vec![] };
    }
    if m == 2 {
        return LayeredCircuit {
            r1: 0,
            r2: 2,
            basis: GateBasis::Restricted,
            layers: vec![Layer::Quantum(QuantumLayer::new(vec![GateOp::Cnot {
                control: 0,
                target: 1,
            }]))],
        };
    }

    let carriers = m - 2;
    let checkers = m - 3;
    let r1 = carriers + checkers;
    let carrier = |j: usize| j - 1;
    let checker = |j: usize| carriers + (j - 1);
    let data = |i: usize| r1 + (i - 1);

    let mut first = Vec::new();
    for j in 2..=carriers {
        first.push(GateOp::H { qubit: carrier(j) });
    }
    first.push(GateOp::Cnot { control: data(1), target: carrier(1) });
    for j in 1..=checkers {
        first.push(GateOp::Cnot { control: carrier(j), target: checker(j) });
    }
    first.push(GateOp::Cnot { control: data(1), target: data(2) });
    for j in 1..=checkers {
        first.push(GateOp::Cnot { control: carrier(j + 1), target: checker(j) });
    }
    for j in 1..=carriers {
        first.push(GateOp::Cnot { control: carrier(j), target: data(j + 2) });
    }
    for j in 1..=carriers {
        first.push(GateOp::H { qubit: carrier(j) });
    }

    let mut matrix = vec![vec![0u8; r1]; r1];
    for j in 1..=carriers {
        matrix[carrier(1)][carrier(j)] = 1;
    }
    for j in 2..=carriers {
        for i in 1..j {
            matrix[carrier(j)][checker(i)] = 1;
        }
    }

    let mut second = vec![GateOp::H { qubit: data(1) }];
    second.push(GateOp::Cnot { control: carrier(1), target: data(1) });
    for j in 2..=carriers {
        second.push(GateOp::Cnot { control: carrier(j), target: data(j + 2) });
    }
    second.push(GateOp::H { qubit: data(1) });

    LayeredCircuit {
        r1,
        r2: m,
        basis: GateBasis::Restricted,
        layers: vec![
            Layer::Quantum(QuantumLayer::new(first)),
            Layer::Measure,
            Layer::Correction(ClassicalCorrection::new(matrix, None)),
            Layer::Quantum(QuantumLayer::new(second)),
        ],
    }
}

/// Applies the linear-depth CNOT ladder directly to an `m`-qubit state.
pub fn reference_fanout(m: usize, state: &[Complex64]) -> Vec<Complex64> {
    assert!(m >= 1, "fanout needs at least one data qubit");
    assert_eq!(state.len(), 1usize << m, "state must cover exactly m qubits");
    let mut amps = state.to_vec();
    for target in 1..m {
        apply_cnot(&mut amps, 0, target);
    }
    amps
}
