//! Verifier side of the interactive round.
//!
//! One round, as a message sequence:
//!
//! ```text
//! 1. verifier samples (A, t_A), s, e ~ D^m, sends (A, u = A s + e)
//! 2. prover sends a commitment y
//! 3. verifier sends a uniform challenge bit r
//! 4. prover sends (b, x)   if r = 0
//!               (c, d)     if r = 1
//! 5. r = 0: accept iff |A x + b u - y|^2 <= 4 q^2 / (C^2 n log2 q)
//!    r = 1: x0 = INVERT(A, t_A, y); accept iff the residual
//!           |A x0 - y| passes the same radius, c = <d, J(x0) xor
//!           J(x0 - s)>, and d is in the good set G_{s,0,x0};
//!           inversion failure rejects with its own reason code
//! ```
//!
//! The machine only moves forward (Init, Committed, Challenged,
//! Decided); calling a step out of order is an error, not a reject. The
//! decision itself is a pure function of logged values, exposed as
//! [`reverify_decision`] so transcript files can be re-judged offline.

use crate::error::{ProtocolError, ProtocolResult};
use crate::gset::{equation_bit, in_g_sbx};
use crate::messages::{Challenge, RejectReason, Response, Transcript, Verdict};
use rand::Rng;
use zq_lattice::{
    gentrap, invert, make_instance, LweInstance, LweWitness, ProtocolParams, TrapdoorKeypair,
    ZqError, ZqVector,
};

/// Forward-only round phase.
#[derive(Debug, Clone, PartialEq)]
enum Phase {
    Init,
    Committed { y: ZqVector },
    Challenged { y: ZqVector, r: Challenge },
    Decided { accept: bool },
}

impl Phase {
    fn name(&self) -> &'static str {
        match self {
            Phase::Init => "init",
            Phase::Committed { .. } => "committed",
            Phase::Challenged { .. } => "challenged",
            Phase::Decided { .. } => "decided",
        }
    }
}

/// Verifier state for a single trial.
#[derive(Debug, Clone)]
pub struct Verifier {
    params: ProtocolParams,
    keypair: TrapdoorKeypair,
    s: ZqVector,
    e: ZqVector,
    u: ZqVector,
    phase: Phase,
}

impl Verifier {
    /// Runs key generation and instance sampling (step 1).
    pub fn new<R: Rng + ?Sized>(params: &ProtocolParams, rng: &mut R) -> ProtocolResult<Self> {
        let keypair = gentrap(params.n, params.m, params.q, rng)?;
        let (instance, witness) = make_instance(&keypair, params, rng)?;
        Ok(Self {
            params: params.clone(),
            keypair,
            s: witness.s,
            e: witness.e,
            u: instance.u,
            phase: Phase::Init,
        })
    }

    /// Rebuilds a verifier from recorded material, recomputing `u`.
    pub fn from_parts(
        params: ProtocolParams,
        keypair: TrapdoorKeypair,
        s: ZqVector,
        e: ZqVector,
    ) -> ProtocolResult<Self> {
        let u = keypair.matrix().mul_vec(&s)?.add(&e)?;
        Ok(Self { params, keypair, s, e, u, phase: Phase::Init })
    }

    /// Parameter set in force.
    pub fn params(&self) -> &ProtocolParams {
        &self.params
    }

    /// Public matrix and trapdoor.
    pub fn keypair(&self) -> &TrapdoorKeypair {
        &self.keypair
    }

    /// Public instance `(A, u)` sent at step 1.
    pub fn instance(&self) -> LweInstance {
        LweInstance { matrix: self.keypair.matrix().clone(), u: self.u.clone() }
    }

    /// Secret witness; only the simulation harness may read this (the
    /// honest-prover model and the extraction experiments collude with
    /// the verifier by construction and are flagged `simulation_only`).
    pub fn witness(&self) -> LweWitness {
        LweWitness { s: self.s.clone(), e: self.e.clone() }
    }

    /// Current phase name, for diagnostics.
    pub fn phase_name(&self) -> &'static str {
        self.phase.name()
    }

    fn expect_phase(&self, expected: &'static str) -> ProtocolResult<()> {
        if self.phase.name() != expected {
            return Err(ProtocolError::PhaseMismatch { expected, found: self.phase.name() });
        }
        Ok(())
    }

    /// Step 2: records the prover's commitment.
    pub fn receive_commitment(&mut self, y: ZqVector) -> ProtocolResult<()> {
        self.expect_phase("init")?;
        if y.q() != self.params.q || y.len() != self.params.m {
            return Err(ProtocolError::ResponseShape {
                detail: format!(
                    "commitment must be length {} over Z_{}, got length {} over Z_{}",
                    self.params.m,
                    self.params.q,
                    y.len(),
                    y.q()
                ),
            });
        }
        self.phase = Phase::Committed { y };
        Ok(())
    }

    /// Step 3: draws and records the uniform challenge bit.
    pub fn issue_challenge<R: Rng + ?Sized>(&mut self, rng: &mut R) -> ProtocolResult<Challenge> {
        self.expect_phase("committed")?;
        let Phase::Committed { y } = std::mem::replace(&mut self.phase, Phase::Init) else {
            unreachable!("phase checked above");
        };
        let r = Challenge::new(rng.gen_range(0..2))?;
        self.phase = Phase::Challenged { y, r };
        Ok(r)
    }

    /// Replay path: installs a recorded challenge instead of drawing one.
    pub fn force_challenge(&mut self, r: Challenge) -> ProtocolResult<()> {
        self.expect_phase("committed")?;
        let Phase::Committed { y } = std::mem::replace(&mut self.phase, Phase::Init) else {
            unreachable!("phase checked above");
        };
        self.phase = Phase::Challenged { y, r };
        Ok(())
    }

    /// Step 5: judges the response against the recorded challenge.
    pub fn decide(&mut self, response: &Response) -> ProtocolResult<Verdict> {
        self.expect_phase("challenged")?;
        let Phase::Challenged { y, r } = self.phase.clone() else {
            unreachable!("phase checked above");
        };
        let (accept, reason) = judge_response(
            &self.params,
            &self.keypair,
            &self.s,
            &self.u,
            &y,
            r,
            response,
        )?;
        self.phase = Phase::Decided { accept };
        Ok(Verdict { accept, reason, simulation_only: false })
    }
}

/// The pure step-5 decision: a function of logged values only.
pub fn judge_response(
    params: &ProtocolParams,
    keypair: &TrapdoorKeypair,
    s: &ZqVector,
    u: &ZqVector,
    y: &ZqVector,
    r: Challenge,
    response: &Response,
) -> ProtocolResult<(bool, Option<RejectReason>)> {
    let a = keypair.matrix();
    let radius_sq = params.accept_radius_sq()?;
    match (r.bit(), response) {
        (0, Response::Preimage { b, x }) => {
            if *b > 1 {
                return Err(ProtocolError::NotABit { value: *b });
            }
            if x.q() != params.q || x.len() != params.n {
                return Err(ProtocolError::ResponseShape {
                    detail: format!(
                        "preimage must be length {} over Z_{}, got length {} over Z_{}",
                        params.n,
                        params.q,
                        x.len(),
                        x.q()
                    ),
                });
            }
            let mut image = a.mul_vec(x)?;
            if *b == 1 {
                image = image.add(u)?;
            }
            let norm_sq = image.sub(y)?.norm_sq();
            if radius_sq.admits(norm_sq)? {
                Ok((true, None))
            } else {
                Ok((false, Some(RejectReason::PreimageNorm)))
            }
        }
        (1, Response::Equation { c, d }) => {
            if *c > 1 {
                return Err(ProtocolError::NotABit { value: *c });
            }
            let x0 = match invert(keypair, params, y) {
                Ok(x0) => x0,
                Err(ZqError::InversionFailed) => {
                    return Ok((false, Some(RejectReason::InversionFailed)))
                }
                Err(other) => return Err(other.into()),
            };
            let residual_sq = a.mul_vec(&x0)?.sub(y)?.norm_sq();
            if !radius_sq.admits(residual_sq)? {
                return Ok((false, Some(RejectReason::ResidualNorm)));
            }
            if equation_bit(d, &x0, s)? != *c {
                return Ok((false, Some(RejectReason::EquationMismatch)));
            }
            if !in_g_sbx(d, s, 0, &x0)? {
                return Ok((false, Some(RejectReason::OutsideGoodSet)));
            }
            Ok((true, None))
        }
        (_, other) => Err(ProtocolError::ResponseShape {
            detail: format!(
                "challenge {} but response variant {}",
                r.bit(),
                match other {
                    Response::Preimage { .. } => "preimage",
                    Response::Equation { .. } => "equation",
                }
            ),
        }),
    }
}

/// Re-judges a logged trial: the recorded decision inputs go through the
/// same pure procedure, yielding what the verdict must have been.
pub fn reverify_decision(t: &Transcript) -> ProtocolResult<(bool, Option<RejectReason>)> {
    let recomputed_u = t.keypair.matrix().mul_vec(&t.s)?.add(&t.e)?;
    if recomputed_u != t.u {
        return Err(ProtocolError::TranscriptFormat {
            detail: format!("trial {}: logged u is not A s + e", t.trial),
        });
    }
    judge_response(&t.params, &t.keypair, &t.s, &t.u, &t.commitment, t.challenge, &t.response)
}
