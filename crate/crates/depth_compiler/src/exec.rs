//! Dense statevector execution of layered circuits.
//!
//! The register is little-endian: qubit `i` is bit `i` of a basis index, the
//! measured register occupies the low `r1` bits, and the persistent register
//! the high `r2` bits.  Inputs and outputs are states on the persistent
//! register alone; ancillas start in `|0…0⟩` and are consumed by measurement.
//!
//! ```text
//! full index = (data_index << r1) | ancilla_index
//! ```
//!
//! Two execution modes are provided: [`run_layered`] samples one measurement
//! trajectory with a caller-supplied generator, and [`run_all_branches`]
//! enumerates every measurement outcome sequence of non-negligible
//! probability, sharing all work up to each branch point.

use num_complex::Complex64;
use rand::Rng;

use crate::circuit::{Layer, LayeredCircuit};
use crate::error::{DepthError, DepthResult};
use crate::gate::{GateOp, OpaqueLayerGate};

/// Largest register the dense executor will simulate.
pub const QUBIT_CAP: usize = 22;

/// Tolerance for input normalization.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Branches below this probability are dropped by the enumerator.
pub const BRANCH_PROBABILITY_FLOOR: f64 = 1e-12;

/// Result of a single sampled execution.
#[derive(Debug, Clone)]
pub struct RunRecord {
    /// Final state on the persistent register, length `2^{r2}`.
    pub output: Vec<Complex64>,
    /// Measured ancilla bits per event, including the final readout.
    pub log: Vec<Vec<u8>>,
}

/// One enumerated measurement trajectory.
#[derive(Debug, Clone)]
pub struct Branch {
    /// Joint probability of this outcome sequence.
    pub probability: f64,
    /// Measured ancilla bits per event, including the final readout.
    pub log: Vec<Vec<u8>>,
    /// Final state on the persistent register, length `2^{r2}`.
    pub output: Vec<Complex64>,
}

/// Squared overlap `|⟨a|b⟩|²` between two dense states.
pub fn fidelity(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut overlap = Complex64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        overlap += x.conj() * y;
    }
    overlap.norm_sqr()
}

/// Executes one sampled trajectory of the circuit on the given input state.
pub fn run_layered<R: Rng + ?Sized>(
    circuit: &LayeredCircuit,
    input: &[Complex64],
    rng: &mut R,
) -> DepthResult<RunRecord> {
    check_run(circuit, input)?;
    let r1 = circuit.r1;
    let mut amps = embed_input(input, r1, circuit.total_qubits());
    let mut log = Vec::new();
    let mut last_outcome = 0usize;
    for layer in &circuit.layers {
        match layer {
            Layer::Quantum(block) => {
                for gate in &block.gates {
                    apply_gate(&mut amps, gate);
                }
            }
            Layer::Measure => {
                let probs = outcome_probabilities(&amps, r1);
                let outcome = sample_outcome(&probs, rng);
                collapse(&mut amps, r1, outcome, probs[outcome]);
                log.push(outcome_bits(outcome, r1));
                last_outcome = outcome;
            }
            Layer::Correction(correction) => {
                let image = bits_to_index(&correction.apply(&outcome_bits(last_outcome, r1)));
                relabel_ancillas(&mut amps, r1, last_outcome, image);
                last_outcome = image;
            }
        }
    }
    let output = if r1 == 0 {
        amps
    } else {
        let probs = outcome_probabilities(&amps, r1);
        let outcome = sample_outcome(&probs, rng);
        collapse(&mut amps, r1, outcome, probs[outcome]);
        log.push(outcome_bits(outcome, r1));
        extract_data(&amps, r1, outcome)
    };
    Ok(RunRecord { output, log })
}

/// Enumerates every measurement trajectory with its probability and output.
pub fn run_all_branches(circuit: &LayeredCircuit, input: &[Complex64]) -> DepthResult<Vec<Branch>> {
    check_run(circuit, input)?;
    let amps = embed_input(input, circuit.r1, circuit.total_qubits());
    let mut branches = Vec::new();
    explore(circuit, 0, BranchState::Dense(amps), Vec::new(), 1.0, &mut branches);
    Ok(branches)
}

/// Per-branch state: either the full register, or the register after a
/// collapse with the ancillas pinned to a classical bit pattern.  The pinned
/// form keeps branch enumeration proportional to the persistent register, not
/// the full one; gates that would unpin the ancillas re-expand on demand.
enum BranchState {
    Dense(Vec<Complex64>),
    Pinned { data: Vec<Complex64>, ancillas: usize },
}

fn explore(
    circuit: &LayeredCircuit,
    from_layer: usize,
    mut state: BranchState,
    log: Vec<Vec<u8>>,
    probability: f64,
    branches: &mut Vec<Branch>,
) {
    let r1 = circuit.r1;
    for index in from_layer..circuit.layers.len() {
        match &circuit.layers[index] {
            Layer::Quantum(block) => {
                for gate in &block.gates {
                    state = apply_branch_gate(state, gate, r1);
                }
            }
            Layer::Measure => match state {
                BranchState::Pinned { ref ancillas, .. } => {
                    let mut log = log;
                    log.push(outcome_bits(*ancillas, r1));
                    return explore(circuit, index + 1, state, log, probability, branches);
                }
                BranchState::Dense(amps) => {
                    let probs = outcome_probabilities(&amps, r1);
                    for (outcome, &p) in probs.iter().enumerate() {
                        if p <= BRANCH_PROBABILITY_FLOOR {
                            continue;
                        }
                        let mut data = extract_data(&amps, r1, outcome);
                        let scale = 1.0 / p.sqrt();
                        for amp in &mut data {
                            *amp *= scale;
                        }
                        let mut log = log.clone();
                        log.push(outcome_bits(outcome, r1));
                        explore(
                            circuit,
                            index + 1,
                            BranchState::Pinned { data, ancillas: outcome },
                            log,
                            probability * p,
                            branches,
                        );
                    }
                    return;
                }
            },
            Layer::Correction(correction) => match &mut state {
                BranchState::Pinned { ancillas, .. } => {
                    *ancillas = bits_to_index(&correction.apply(&outcome_bits(*ancillas, r1)));
                }
                // Validation pins corrections directly behind measurements,
                // and every measurement leaves the ancillas pinned.
                BranchState::Dense(_) => unreachable!("correction follows a measurement"),
            },
        }
    }
    match state {
        BranchState::Pinned { data, ancillas } => {
            let mut log = log;
            log.push(outcome_bits(ancillas, r1));
            branches.push(Branch { probability, log, output: data });
        }
        BranchState::Dense(amps) => {
            if r1 == 0 {
                branches.push(Branch { probability, log, output: amps });
                return;
            }
            let probs = outcome_probabilities(&amps, r1);
            for (outcome, &p) in probs.iter().enumerate() {
                if p <= BRANCH_PROBABILITY_FLOOR {
                    continue;
                }
                let mut output = extract_data(&amps, r1, outcome);
                let scale = 1.0 / p.sqrt();
                for amp in &mut output {
                    *amp *= scale;
                }
                let mut log = log.clone();
                log.push(outcome_bits(outcome, r1));
                branches.push(Branch { probability: probability * p, log, output });
            }
        }
    }
}

fn apply_branch_gate(state: BranchState, gate: &GateOp, r1: usize) -> BranchState {
    let mut state = state;
    if let BranchState::Pinned { data, ancillas } = &mut state {
        match gate {
            GateOp::Cnot { control, target } => {
                match (*control < r1, *target < r1) {
                    (true, true) => {
                        if *ancillas >> control & 1 == 1 {
                            *ancillas ^= 1 << target;
                        }
                        return state;
                    }
                    (true, false) => {
                        if *ancillas >> control & 1 == 1 {
                            apply_x(data, target - r1);
                        }
                        return state;
                    }
                    (false, false) => {
                        apply_cnot(data, control - r1, target - r1);
                        return state;
                    }
                    // A data-controlled flip entangles the ancillas again.
                    (false, true) => {}
                }
            }
            GateOp::Opaque(inner) => {
                if inner.qubits.iter().all(|&q| q >= r1) {
                    let shifted: Vec<usize> = inner.qubits.iter().map(|&q| q - r1).collect();
                    apply_opaque(data, &shifted, inner);
                    return state;
                }
            }
            _ => {
                let qubit = gate.qubits()[0];
                let matrix = gate.single_qubit_matrix().expect("remaining gates are 1-qubit");
                if qubit >= r1 {
                    apply_single(data, &matrix, qubit - r1);
                    return state;
                }
                let bit = *ancillas >> qubit & 1;
                let stay = matrix[bit as usize][bit as usize];
                let hop = matrix[1 - bit as usize][bit as usize];
                if hop.norm() == 0.0 {
                    for amp in data.iter_mut() {
                        *amp *= stay;
                    }
                    return state;
                }
                if stay.norm() == 0.0 {
                    *ancillas ^= 1 << qubit;
                    for amp in data.iter_mut() {
                        *amp *= hop;
                    }
                    return state;
                }
                // A mixing gate (e.g. H) puts the ancilla back in superposition.
            }
        }
    }
    let mut amps = match state {
        BranchState::Dense(amps) => amps,
        BranchState::Pinned { data, ancillas } => {
            let mut amps = vec![Complex64::new(0.0, 0.0); data.len() << r1];
            for (data_index, amp) in data.into_iter().enumerate() {
                amps[(data_index << r1) | ancillas] = amp;
            }
            amps
        }
    };
    apply_gate(&mut amps, gate);
    BranchState::Dense(amps)
}

// ----------------------------------------------------------- dense primitives

fn check_run(circuit: &LayeredCircuit, input: &[Complex64]) -> DepthResult<()> {
    circuit.validate()?;
    let total = circuit.total_qubits();
    if total > QUBIT_CAP {
        return Err(DepthError::TooManyQubits { qubits: total, cap: QUBIT_CAP });
    }
    let expected = 1usize << circuit.r2;
    if input.len() != expected {
        return Err(DepthError::InputSize { expected, got: input.len() });
    }
    let norm_sq: f64 = input.iter().map(|amp| amp.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
        return Err(DepthError::NotNormalized { norm_sq });
    }
    Ok(())
}

fn embed_input(input: &[Complex64], r1: usize, total: usize) -> Vec<Complex64> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << total];
    for (data_index, &amp) in input.iter().enumerate() {
        amps[data_index << r1] = amp;
    }
    amps
}

fn apply_gate(amps: &mut Vec<Complex64>, gate: &GateOp) {
    match gate {
        GateOp::Cnot { control, target } => apply_cnot(amps, *control, *target),
        GateOp::Opaque(inner) => apply_opaque(amps, &inner.qubits, inner),
        _ => {
            let qubit = gate.qubits()[0];
            let matrix = gate.single_qubit_matrix().expect("remaining gates are 1-qubit");
            apply_single(amps, &matrix, qubit);
        }
    }
}

fn apply_single(amps: &mut [Complex64], matrix: &[[Complex64; 2]; 2], qubit: usize) {
    let bit = 1usize << qubit;
    for index in 0..amps.len() {
        if index & bit == 0 {
            let low = amps[index];
            let high = amps[index | bit];
            amps[index] = matrix[0][0] * low + matrix[0][1] * high;
            amps[index | bit] = matrix[1][0] * low + matrix[1][1] * high;
        }
    }
}

fn apply_x(amps: &mut [Complex64], qubit: usize) {
    let bit = 1usize << qubit;
    for index in 0..amps.len() {
        if index & bit == 0 {
            amps.swap(index, index | bit);
        }
    }
}

pub(crate) fn apply_cnot(amps: &mut [Complex64], control: usize, target: usize) {
    let control_bit = 1usize << control;
    let target_bit = 1usize << target;
    for index in 0..amps.len() {
        if index & control_bit != 0 && index & target_bit == 0 {
            amps.swap(index, index | target_bit);
        }
    }
}

fn apply_opaque(amps: &mut Vec<Complex64>, qubits: &[usize], gate: &OpaqueLayerGate) {
    let mut next = vec![Complex64::new(0.0, 0.0); amps.len()];
    for (index, &amp) in amps.iter().enumerate() {
        let mut sub = 0usize;
        for (position, &qubit) in qubits.iter().enumerate() {
            sub |= (index >> qubit & 1) << position;
        }
        let image_sub = gate.permutation[sub] as usize;
        let mut image = index;
        for (position, &qubit) in qubits.iter().enumerate() {
            image = (image & !(1usize << qubit)) | ((image_sub >> position & 1) << qubit);
        }
        let phase = gate.phases.as_ref().map_or(Complex64::new(1.0, 0.0), |phases| phases[sub]);
        next[image] = phase * amp;
    }
    *amps = next;
}

fn outcome_probabilities(amps: &[Complex64], r1: usize) -> Vec<f64> {
    let mask = (1usize << r1) - 1;
    let mut probs = vec![0.0; 1usize << r1];
    for (index, amp) in amps.iter().enumerate() {
        probs[index & mask] += amp.norm_sqr();
    }
    probs
}

fn sample_outcome<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let draw = rng.gen::<f64>();
    let mut cumulative = 0.0;
    let mut fallback = 0;
    for (index, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            fallback = index;
            cumulative += p;
            if draw < cumulative {
                return index;
            }
        }
    }
    fallback
}

fn collapse(amps: &mut [Complex64], r1: usize, outcome: usize, probability: f64) {
    let mask = (1usize << r1) - 1;
    let scale = 1.0 / probability.sqrt();
    for (index, amp) in amps.iter_mut().enumerate() {
        if index & mask == outcome {
            *amp *= scale;
        } else {
            *amp = Complex64::new(0.0, 0.0);
        }
    }
}

fn relabel_ancillas(amps: &mut Vec<Complex64>, r1: usize, from: usize, to: usize) {
    if from == to {
        return;
    }
    let mask = (1usize << r1) - 1;
    let mut next = vec![Complex64::new(0.0, 0.0); amps.len()];
    for (index, &amp) in amps.iter().enumerate() {
        if index & mask == from {
            next[(index & !mask) | to] = amp;
        }
    }
    *amps = next;
}

fn extract_data(amps: &[Complex64], r1: usize, outcome: usize) -> Vec<Complex64> {
    let data_len = amps.len() >> r1;
    (0..data_len).map(|data_index| amps[(data_index << r1) | outcome]).collect()
}

fn outcome_bits(outcome: usize, r1: usize) -> Vec<u8> {
    (0..r1).map(|bit| (outcome >> bit & 1) as u8).collect()
}

fn bits_to_index(bits: &[u8]) -> usize {
    bits.iter().enumerate().fold(0usize, |acc, (bit, &value)| acc | ((value as usize) << bit))
}
