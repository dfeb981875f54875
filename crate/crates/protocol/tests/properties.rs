//! Property tests for the protocol-layer invariants: linearity of the
//! block parity map, the good-set classification partition, interval
//! estimates, seed separation, and wire-format round trips.

use proptest::prelude::*;
use protocol::{
    classify_tuple, derive_rng, equation_bit, i_map, in_g_sbx, wilson_interval, HardcoreTuple,
    Response, TupleClass,
};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use zq_lattice::{binary_encode_vector, bit_width, ZqVector};

/// Uniform bit vector of the given length.
fn random_bits(len: usize, rng: &mut ChaCha20Rng) -> Vec<u8> {
    (0..len).map(|_| rng.gen_range(0..2u8)).collect()
}

/// Coordinate-wise XOR of two equal-length bit vectors.
fn xor(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(&p, &q)| p ^ q).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // ---------------------------------------------------------------
    // block parity map and the equation bit
    // ---------------------------------------------------------------

    #[test]
    fn block_parity_map_is_linear_in_d(
        n_half in 1usize..3,
        q_pow in 2u32..5,
        b in 0u8..2,
        seed in any::<u64>(),
    ) {
        let n = 2 * n_half;
        let q = 1u64 << q_pow;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let x = ZqVector::uniform(q, n, &mut rng).unwrap();
        let bits = n * bit_width(q) as usize;
        let d1 = random_bits(bits, &mut rng);
        let d2 = random_bits(bits, &mut rng);

        let lhs = i_map(&xor(&d1, &d2), b, &x).unwrap();
        let rhs = xor(&i_map(&d1, b, &x).unwrap(), &i_map(&d2, b, &x).unwrap());
        prop_assert_eq!(lhs, rhs, "the parity map must be GF(2)-linear in d");
    }

    #[test]
    fn equation_bit_is_the_parity_against_the_encoding_difference(
        n_half in 1usize..3,
        q_pow in 2u32..5,
        seed in any::<u64>(),
    ) {
        let n = 2 * n_half;
        let q = 1u64 << q_pow;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let x0 = ZqVector::uniform(q, n, &mut rng).unwrap();
        let s = ZqVector::uniform(q, n, &mut rng).unwrap();
        let d = random_bits(n * bit_width(q) as usize, &mut rng);

        // Independent route: XOR the two encodings and take the parity.
        let mask = xor(
            &binary_encode_vector(&x0),
            &binary_encode_vector(&x0.sub(&s).unwrap()),
        );
        let direct: u8 = d.iter().zip(&mask).map(|(&a, &b)| a & b).fold(0, |acc, t| acc ^ t);
        prop_assert_eq!(equation_bit(&d, &x0, &s).unwrap(), direct);
    }

    #[test]
    fn good_set_membership_is_symmetric_across_the_claw(
        n_half in 1usize..3,
        q_pow in 2u32..5,
        seed in any::<u64>(),
    ) {
        let n = 2 * n_half;
        let q = 1u64 << q_pow;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let x = ZqVector::uniform(q, n, &mut rng).unwrap();
        let s = ZqVector::uniform(q, n, &mut rng).unwrap();
        let d = random_bits(n * bit_width(q) as usize, &mut rng);

        // Branch 1 at x is branch 0 at the other claw member x + s.
        prop_assert_eq!(
            in_g_sbx(&d, &s, 1, &x).unwrap(),
            in_g_sbx(&d, &s, 0, &x.add(&s).unwrap()).unwrap()
        );
    }

    // ---------------------------------------------------------------
    // classification partition
    // ---------------------------------------------------------------

    #[test]
    fn classification_agrees_with_the_direct_mask_arithmetic(
        n_half in 1usize..3,
        q_pow in 2u32..5,
        b in 0u8..2,
        c in 0u8..2,
        seed in any::<u64>(),
    ) {
        let n = 2 * n_half;
        let q = 1u64 << q_pow;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let x = ZqVector::uniform(q, n, &mut rng).unwrap();
        let s = ZqVector::uniform(q, n, &mut rng).unwrap();
        let d = random_bits(n * bit_width(q) as usize, &mut rng);
        let tuple = HardcoreTuple { b, x: x.clone(), d: d.clone(), c };

        let class = classify_tuple(&tuple, &s).unwrap();
        if !in_g_sbx(&d, &s, b, &x).unwrap() {
            prop_assert_eq!(class, TupleClass::Neither, "outside the good set");
        } else {
            // Inside the good set the label is decided by the parity
            // against the encoding difference across this claw.
            let other = if b == 0 { x.sub(&s).unwrap() } else { x.add(&s).unwrap() };
            let mask = xor(&binary_encode_vector(&x), &binary_encode_vector(&other));
            let parity: u8 =
                d.iter().zip(&mask).map(|(&a, &b)| a & b).fold(0, |acc, t| acc ^ t);
            let expected = if c == parity { TupleClass::InH } else { TupleClass::InHbar };
            prop_assert_eq!(class, expected);
        }
    }

    #[test]
    fn flipping_c_swaps_the_halves_and_fixes_neither(
        n_half in 1usize..3,
        q_pow in 2u32..5,
        b in 0u8..2,
        c in 0u8..2,
        seed in any::<u64>(),
    ) {
        let n = 2 * n_half;
        let q = 1u64 << q_pow;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let x = ZqVector::uniform(q, n, &mut rng).unwrap();
        let s = ZqVector::uniform(q, n, &mut rng).unwrap();
        let d = random_bits(n * bit_width(q) as usize, &mut rng);

        let tuple = HardcoreTuple { b, x: x.clone(), d: d.clone(), c };
        let flipped = HardcoreTuple { b, x, d, c: c ^ 1 };
        let expected = match classify_tuple(&tuple, &s).unwrap() {
            TupleClass::InH => TupleClass::InHbar,
            TupleClass::InHbar => TupleClass::InH,
            TupleClass::Neither => TupleClass::Neither,
        };
        prop_assert_eq!(classify_tuple(&flipped, &s).unwrap(), expected);
    }

    // ---------------------------------------------------------------
    // interval estimates
    // ---------------------------------------------------------------

    #[test]
    fn wilson_interval_brackets_the_point_estimate(
        trials in 1u64..5000,
        numerator in any::<u64>(),
    ) {
        let successes = numerator % (trials + 1);
        let (low, high) = wilson_interval(successes, trials);
        let rate = successes as f64 / trials as f64;
        prop_assert!((0.0..=1.0).contains(&low));
        prop_assert!((0.0..=1.0).contains(&high));
        prop_assert!(low <= rate + 1e-12, "low {low} must not exceed rate {rate}");
        prop_assert!(high >= rate - 1e-12, "high {high} must not undercut rate {rate}");
        prop_assert!(low < high, "the interval has positive width");
    }

    #[test]
    fn wilson_interval_tightens_with_more_trials(
        trials in 10u64..2000,
        numerator in any::<u64>(),
    ) {
        let successes = numerator % (trials + 1);
        let (low_small, high_small) = wilson_interval(successes, trials);
        let (low_big, high_big) = wilson_interval(successes * 16, trials * 16);
        prop_assert!(
            high_big - low_big < high_small - low_small + 1e-12,
            "sixteenfold data must not widen the interval"
        );
    }

    // ---------------------------------------------------------------
    // seed separation and the wire format
    // ---------------------------------------------------------------

    #[test]
    fn derived_streams_separate_by_trial_and_role(
        master in any::<u64>(),
        trial in 0u64..1_000_000,
    ) {
        let word = |tag: &str, t: u64| derive_rng(master, tag, t).next_u64();
        prop_assert_ne!(
            word("protocol/verifier", trial),
            word("protocol/prover", trial),
            "roles must draw from unrelated streams"
        );
        prop_assert_ne!(
            word("protocol/verifier", trial),
            word("protocol/verifier", trial + 1),
            "adjacent trials must draw from unrelated streams"
        );
        // Re-derivation is stable.
        prop_assert_eq!(word("protocol/prover", trial), word("protocol/prover", trial));
    }

    #[test]
    fn responses_round_trip_through_json(
        b in 0u8..2,
        c in 0u8..2,
        q_pow in 2u32..6,
        seed in any::<u64>(),
    ) {
        let q = 1u64 << q_pow;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let x = ZqVector::uniform(q, 3, &mut rng).unwrap();
        let d = random_bits(3 * bit_width(q) as usize, &mut rng);

        for response in [Response::Preimage { b, x: x.clone() }, Response::Equation { c, d }] {
            let json = serde_json::to_string(&response).unwrap();
            let back: Response = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, response);
        }
    }
}
