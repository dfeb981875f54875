//! Rewinding extraction of hardcore tuples and their classification.
//!
//! Running a committed prover down both challenge branches — physically
//! impossible, trivial inside a simulation — assembles a tuple
//! `(b, x, d, c)` that the hardcore-bit dichotomy classifies:
//!
//! ```text
//! InH      d in G_{s,b,x}  and  c  = <d, J(x) xor J(x - (-1)^b s)>
//! InHbar   d in G_{s,b,x}  and  c != <d, J(x) xor J(x - (-1)^b s)>
//! Neither  d outside G_{s,b,x}
//! ```
//!
//! The three labels partition the tuple space, and flipping `c` swaps
//! the first two without touching the third. An honest quantum prover's
//! tuples land in `InH` almost always (the equation bit is exact on a
//! claw; only the good-set density and rare single-branch commitments
//! are lost), which is the dishonesty the classical hardness assumption
//! forbids — the simulation's evidence that the committed state really
//! held both branches.

use crate::error::{ProtocolError, ProtocolResult};
use crate::gset::{equation_bit, in_g_sbx};
use crate::messages::{Challenge, Response};
use crate::provers::Prover;
use rand::RngCore;
use serde::{Deserialize, Serialize};
use zq_lattice::{LweInstance, ZqVector};

/// A rewound prover's answers to both challenges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardcoreTuple {
    /// Branch bit from the `r = 0` answer.
    pub b: u8,
    /// Preimage from the `r = 0` answer.
    pub x: ZqVector,
    /// Probe vector from the `r = 1` answer.
    pub d: Vec<u8>,
    /// Equation bit from the `r = 1` answer.
    pub c: u8,
}

/// Where a tuple falls in the hardcore-bit dichotomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TupleClass {
    /// Good probe, equation satisfied.
    InH,
    /// Good probe, equation violated.
    InHbar,
    /// Probe outside the good set.
    Neither,
}

/// One extraction run: the commitment both answers were rooted at, the
/// assembled tuple, and the mandatory simulation flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extraction {
    /// Committed image vector.
    pub commitment: ZqVector,
    /// Tuple assembled from the two branches.
    pub tuple: HardcoreTuple,
    /// Always true: rewinding only exists inside the simulation.
    pub simulation_only: bool,
}

/// Classifies a tuple against the secret.
pub fn classify_tuple(tuple: &HardcoreTuple, s: &ZqVector) -> ProtocolResult<TupleClass> {
    if !in_g_sbx(&tuple.d, s, tuple.b, &tuple.x)? {
        return Ok(TupleClass::Neither);
    }
    // The branch-dependent shift x - (-1)^b s: subtract s on branch 0,
    // add it (subtract -s) on branch 1.
    let shift = if tuple.b == 0 {
        s.clone()
    } else {
        ZqVector::zero(s.q(), s.len())?.sub(s)?
    };
    let expected = equation_bit(&tuple.d, &tuple.x, &shift)?;
    Ok(if tuple.c == expected { TupleClass::InH } else { TupleClass::InHbar })
}

/// Runs the committed prover down both branches: answer `r = 0`, rewind
/// to the committed state, answer `r = 1`.
pub fn extract_hardcore_tuple(
    prover: &mut dyn Prover,
    instance: &LweInstance,
    rng: &mut dyn RngCore,
) -> ProtocolResult<Extraction> {
    let commitment = prover.commit(instance, rng)?;
    let mut rewound = prover
        .snapshot()
        .ok_or(ProtocolError::UnsupportedRewind { prover: prover.name() })?;

    let first = prover.respond(Challenge::new(0)?, rng)?;
    let Response::Preimage { b, x } = first else {
        return Err(ProtocolError::ResponseShape {
            detail: "r = 0 answer was not a preimage".into(),
        });
    };
    let second = rewound.respond(Challenge::new(1)?, rng)?;
    let Response::Equation { c, d } = second else {
        return Err(ProtocolError::ResponseShape {
            detail: "r = 1 answer was not an equation".into(),
        });
    };
    Ok(Extraction {
        commitment,
        tuple: HardcoreTuple { b, x, d, c },
        simulation_only: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gset::{all_bit_vectors, all_vectors};
    use crate::provers::{LazyClawProver, PassR0Prover, ProverSpec};
    use crate::verifier::Verifier;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use zq_lattice::{ProtocolParams, Ratio};

    fn rng(seed: u64) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(seed)
    }

    /// Windowed trapdoor-friendly parameters (window exponent 7).
    fn windowed_params() -> ProtocolParams {
        ProtocolParams::new(
            16,
            1,
            2,
            26,
            1 << 12,
            Ratio::from_int(2),
            Ratio::from_int(1),
            Ratio::from_int(1),
            Ratio::from_int(1),
        )
        .unwrap()
    }

    // ---------------------------------------------------------------
    // classification is a partition
    // ---------------------------------------------------------------

    #[test]
    fn classification_partitions_every_tuple_at_n2_q4() {
        // Exhaustive over (s, b, x, d, c): 16 * 2 * 16 * 16 * 2 tuples.
        for s in all_vectors(4, 2) {
            let mut in_h = 0u32;
            let mut in_hbar = 0u32;
            let mut neither = 0u32;
            for b in [0u8, 1] {
                for x in all_vectors(4, 2) {
                    for d in all_bit_vectors(4) {
                        for c in [0u8, 1] {
                            let tuple =
                                HardcoreTuple { b, x: x.clone(), d: d.clone(), c };
                            let class = classify_tuple(&tuple, &s).unwrap();
                            match class {
                                TupleClass::InH => in_h += 1,
                                TupleClass::InHbar => in_hbar += 1,
                                TupleClass::Neither => neither += 1,
                            }
                            // The label must agree with the membership
                            // test it claims to encode.
                            let good = in_g_sbx(&d, &s, b, &x).unwrap();
                            assert_eq!(class == TupleClass::Neither, !good);
                        }
                    }
                }
            }
            // Per (s,b,x): 4 of 16 d are good, and each good d puts
            // exactly one c in H: 2*16*4 tuples a side.
            assert_eq!(in_h, 128, "s = {:?}", s.entries());
            assert_eq!(in_hbar, 128);
            assert_eq!(neither, 2 * 16 * 12 * 2);
        }
    }

    #[test]
    fn flipping_c_swaps_the_two_good_labels() {
        let s = ZqVector::new(4, vec![1, 2]).unwrap();
        for b in [0u8, 1] {
            for x in all_vectors(4, 2) {
                for d in all_bit_vectors(4) {
                    for c in [0u8, 1] {
                        let tuple = HardcoreTuple { b, x: x.clone(), d: d.clone(), c };
                        let flipped =
                            HardcoreTuple { b, x: x.clone(), d: d.clone(), c: c ^ 1 };
                        let a = classify_tuple(&tuple, &s).unwrap();
                        let z = classify_tuple(&flipped, &s).unwrap();
                        match a {
                            TupleClass::InH => assert_eq!(z, TupleClass::InHbar),
                            TupleClass::InHbar => assert_eq!(z, TupleClass::InH),
                            TupleClass::Neither => assert_eq!(z, TupleClass::Neither),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn zero_d_is_always_neither() {
        let s = ZqVector::new(4, vec![3, 1]).unwrap();
        for x in all_vectors(4, 2) {
            for c in [0u8, 1] {
                let tuple = HardcoreTuple { b: 0, x: x.clone(), d: vec![0; 4], c };
                assert_eq!(classify_tuple(&tuple, &s).unwrap(), TupleClass::Neither);
            }
        }
    }

    // ---------------------------------------------------------------
    // extraction runs
    // ---------------------------------------------------------------

    #[test]
    fn honest_prover_tuples_match_the_good_set_rate() {
        let params = windowed_params();
        let mut rng = rng(40);
        let mut counts = [0u32; 3];
        for _ in 0..400 {
            let verifier = Verifier::new(&params, &mut rng).unwrap();
            let mut prover =
                LazyClawProver::new(params.clone(), &verifier.witness()).unwrap();
            let extraction =
                extract_hardcore_tuple(&mut prover, &verifier.instance(), &mut rng)
                    .unwrap();
            assert!(extraction.simulation_only, "rewound runs must carry the flag");
            let class = classify_tuple(&extraction.tuple, &verifier.witness().s).unwrap();
            counts[match class {
                TupleClass::InH => 0,
                TupleClass::InHbar => 1,
                TupleClass::Neither => 2,
            }] += 1;
        }
        // At n = 2 the good set holds 1/4 of all d, so paired
        // commitments (almost all of them) land InH at about 0.25 and
        // essentially never InHbar; the rest are Neither.
        let in_h = counts[0] as f64 / 400.0;
        assert!(
            (0.15..=0.35).contains(&in_h),
            "expected an InH rate near the good-set density 0.25, got {in_h}"
        );
        assert!(
            counts[1] <= 20,
            "paired commitments never violate the equation; got {} InHbar",
            counts[1]
        );
    }

    #[test]
    fn pass_r0_tuples_split_between_the_good_labels() {
        let params = windowed_params();
        let mut rng = rng(41);
        let mut in_h = 0u32;
        let mut in_hbar = 0u32;
        for _ in 0..400 {
            let verifier = Verifier::new(&params, &mut rng).unwrap();
            let mut prover = PassR0Prover::new(params.clone());
            let extraction =
                extract_hardcore_tuple(&mut prover, &verifier.instance(), &mut rng)
                    .unwrap();
            match classify_tuple(&extraction.tuple, &verifier.witness().s).unwrap() {
                TupleClass::InH => in_h += 1,
                TupleClass::InHbar => in_hbar += 1,
                TupleClass::Neither => {}
            }
        }
        // The guessed c is an independent fair coin on good probes, so
        // the two labels come out balanced.
        let diff = (in_h as i64 - in_hbar as i64).unsigned_abs();
        assert!(
            diff < 60,
            "classical guessing cannot bias the dichotomy: {in_h} vs {in_hbar}"
        );
    }

    #[test]
    fn extraction_needs_snapshot_support() {
        struct NoRewind;
        impl Prover for NoRewind {
            fn name(&self) -> &'static str {
                "no-rewind"
            }
            fn simulation_only(&self) -> bool {
                false
            }
            fn commit(
                &mut self,
                instance: &LweInstance,
                _rng: &mut dyn RngCore,
            ) -> ProtocolResult<ZqVector> {
                Ok(ZqVector::zero(instance.matrix.q(), instance.matrix.rows())?)
            }
            fn respond(
                &mut self,
                _challenge: Challenge,
                _rng: &mut dyn RngCore,
            ) -> ProtocolResult<Response> {
                Ok(Response::Preimage {
                    b: 0,
                    x: ZqVector::zero(2, 1)?,
                })
            }
            fn snapshot(&self) -> Option<Box<dyn Prover>> {
                None
            }
        }

        let params = windowed_params();
        let mut rng = rng(42);
        let verifier = Verifier::new(&params, &mut rng).unwrap();
        let mut prover = NoRewind;
        let err = extract_hardcore_tuple(&mut prover, &verifier.instance(), &mut rng);
        assert!(matches!(
            err,
            Err(ProtocolError::UnsupportedRewind { prover: "no-rewind" })
        ));
    }

    #[test]
    fn extraction_is_deterministic_given_the_seed() {
        let params = windowed_params();
        let run = |seed: u64| {
            let mut rng = rng(seed);
            let verifier = Verifier::new(&params, &mut rng).unwrap();
            let mut prover =
                LazyClawProver::new(params.clone(), &verifier.witness()).unwrap();
            extract_hardcore_tuple(&mut prover, &verifier.instance(), &mut rng).unwrap()
        };
        assert_eq!(run(43), run(43));
        assert_ne!(run(43), run(44), "different seeds should explore different tuples");
    }

    #[test]
    fn spec_is_irrelevant_to_tuple_shapes() {
        // Tuples built from any strategy have the same shape contract.
        let params = windowed_params();
        let mut rng = rng(45);
        let verifier = Verifier::new(&params, &mut rng).unwrap();
        for spec in [ProverSpec::Quantum, ProverSpec::PassR0, ProverSpec::Random] {
            let mut prover =
                crate::provers::build_prover(spec, &params, &verifier.witness()).unwrap();
            let extraction =
                extract_hardcore_tuple(prover.as_mut(), &verifier.instance(), &mut rng)
                    .unwrap();
            assert!(extraction.tuple.b <= 1);
            assert!(extraction.tuple.c <= 1);
            assert_eq!(extraction.tuple.d.len(), params.d_bits());
            assert_eq!(extraction.tuple.x.len(), params.n);
        }
    }
}
