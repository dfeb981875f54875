//! Property tests: executor consistency, correction linearity, and the
//! equivalence of compiled fanout with its linear-depth reference ladder.

use depth_compiler::{
    compile_fanout, fidelity, reference_fanout, run_all_branches, run_layered,
    ClassicalCorrection, GateBasis, GateOp, Layer, LayeredCircuit, OpaqueLayerGate, QuantumLayer,
};
use num_complex::Complex64;
use proptest::collection::vec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn normalized_state(qubits: usize) -> impl Strategy<Value = Vec<Complex64>> {
    vec((-1.0f64..1.0, -1.0f64..1.0), 1usize << qubits).prop_filter_map(
        "state must have a usable norm",
        |pairs| {
            let mut amps: Vec<Complex64> =
                pairs.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
            let norm = amps.iter().map(|amp| amp.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-3 {
                return None;
            }
            for amp in &mut amps {
                *amp /= norm;
            }
            Some(amps)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // ------------------------------------------------------ fanout equivalence

    /// Every measurement branch of the compiled fanout reproduces the ladder.
    #[test]
    fn compiled_fanout_matches_the_ladder_on_every_branch(
        m in 2usize..=5,
        seed in 0u64..1 << 48,
    ) {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut amps: Vec<Complex64> = (0..1usize << m)
            .map(|_| {
                Complex64::new(
                    rand::Rng::gen::<f64>(&mut rng) - 0.5,
                    rand::Rng::gen::<f64>(&mut rng) - 0.5,
                )
            })
            .collect();
        let norm = amps.iter().map(|amp| amp.norm_sqr()).sum::<f64>().sqrt();
        for amp in &mut amps {
            *amp /= norm;
        }
        let expected = reference_fanout(m, &amps);
        let circuit = compile_fanout(m);
        let branches = run_all_branches(&circuit, &amps).expect("fanout enumerates");
        prop_assert_eq!(branches.len(), 1usize << circuit.r1, "all readouts occur");
        let uniform = 1.0 / (1usize << circuit.r1) as f64;
        for branch in &branches {
            prop_assert!(
                (branch.probability - uniform).abs() < 1e-9,
                "fanout readouts are uniform: got {} at m={}", branch.probability, m
            );
            let agreement = fidelity(&branch.output, &expected);
            prop_assert!(
                agreement > 1.0 - 1e-9,
                "branch {:?} deviates from the ladder with fidelity {}", branch.log, agreement
            );
        }
    }

    // ------------------------------------------------------ sampled vs branched

    /// A sampled trajectory always lands on one of the enumerated branches.
    #[test]
    fn sampled_trajectories_appear_among_enumerated_branches(
        r1 in 1usize..=2,
        r2 in 1usize..=2,
        gate_picks in vec(any::<prop::sample::Index>(), 1..8),
        tail_picks in vec(any::<prop::sample::Index>(), 0..4),
        seed in 0u64..1 << 48,
        input_seed in 0u64..1 << 48,
    ) {
        let total = r1 + r2;
        let gate_pool: Vec<GateOp> = {
            let mut pool = Vec::new();
            for qubit in 0..total {
                pool.push(GateOp::H { qubit });
                pool.push(GateOp::T { qubit });
                for target in 0..total {
                    if target != qubit {
                        pool.push(GateOp::Cnot { control: qubit, target });
                    }
                }
            }
            pool
        };
        let head: Vec<GateOp> =
            gate_picks.iter().map(|pick| pick.get(&gate_pool).clone()).collect();
        let tail: Vec<GateOp> =
            tail_picks.iter().map(|pick| pick.get(&gate_pool).clone()).collect();
        let mut layers = vec![Layer::Quantum(QuantumLayer::new(head)), Layer::Measure];
        if !tail.is_empty() {
            layers.push(Layer::Quantum(QuantumLayer::new(tail)));
        }
        let circuit = LayeredCircuit { r1, r2, basis: GateBasis::Restricted, layers };

        let mut input_rng = ChaCha20Rng::seed_from_u64(input_seed);
        let mut input: Vec<Complex64> = (0..1usize << r2)
            .map(|_| {
                Complex64::new(
                    rand::Rng::gen::<f64>(&mut input_rng) - 0.5,
                    rand::Rng::gen::<f64>(&mut input_rng) - 0.5,
                )
            })
            .collect();
        let norm = input.iter().map(|amp| amp.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        for amp in &mut input {
            *amp /= norm;
        }

        let branches = run_all_branches(&circuit, &input).expect("circuit enumerates");
        let total_probability: f64 = branches.iter().map(|branch| branch.probability).sum();
        prop_assert!(
            (total_probability - 1.0).abs() < 1e-9,
            "branch probabilities must sum to 1, got {}", total_probability
        );
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let record = run_layered(&circuit, &input, &mut rng).expect("circuit samples");
        let twin = branches.iter().find(|branch| branch.log == record.log);
        let twin = twin.expect("the sampled log must appear among the branches");
        let agreement = fidelity(&twin.output, &record.output);
        prop_assert!(
            agreement > 1.0 - 1e-9,
            "sampled output deviates from its branch with fidelity {}", agreement
        );
    }

    // ------------------------------------------------------ correction algebra

    /// Offset-free corrections are GF(2)-linear: f(a⊕b) = f(a)⊕f(b).
    #[test]
    fn corrections_without_offset_are_linear(
        (matrix, left, right) in (1usize..=6).prop_flat_map(|r1| {
            (vec(vec(0u8..=1, r1), r1), vec(0u8..=1, r1), vec(0u8..=1, r1))
        }),
    ) {
        let correction = ClassicalCorrection::new(matrix, None);
        let combined: Vec<u8> =
            left.iter().zip(right.iter()).map(|(a, b)| a ^ b).collect();
        let image_combined = correction.apply(&combined);
        let image_split: Vec<u8> = correction
            .apply(&left)
            .iter()
            .zip(correction.apply(&right).iter())
            .map(|(a, b)| a ^ b)
            .collect();
        prop_assert_eq!(image_combined, image_split, "correction must respect XOR");
    }

    // ------------------------------------------------------------ opaque gates

    /// Opaque permutation-with-phase tables act unitarily.
    #[test]
    fn opaque_actions_preserve_the_norm(
        (qubits, permutation, angles) in (1usize..=3).prop_flat_map(|qubits| {
            let size = 1usize << qubits;
            (
                Just(qubits),
                Just((0..size as u64).collect::<Vec<u64>>()).prop_shuffle(),
                vec(0.0f64..std::f64::consts::TAU, size),
            )
        }),
        input in (1usize..=3).prop_flat_map(normalized_state),
    ) {
        prop_assume!(input.len() == 1usize << qubits);
        let gate = OpaqueLayerGate {
            label: "shuffle".into(),
            qubits: (0..qubits).collect(),
            declared_depth: 1,
            declared_error: 0.0,
            permutation,
            phases: Some(angles.into_iter().map(|a| Complex64::from_polar(1.0, a)).collect()),
        };
        let circuit = LayeredCircuit {
            r1: 0,
            r2: qubits,
            basis: GateBasis::Modeled,
            layers: vec![Layer::Quantum(QuantumLayer::new(vec![GateOp::Opaque(gate)]))],
        };
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let record = run_layered(&circuit, &input, &mut rng).expect("opaque circuit runs");
        let norm_sq: f64 = record.output.iter().map(|amp| amp.norm_sqr()).sum();
        prop_assert!(
            (norm_sq - 1.0).abs() < 1e-9,
            "permutation-with-phase action must preserve the norm, got {}", norm_sq
        );
    }
}
