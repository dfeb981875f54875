//! Prover strategies: two honest quantum models and three classical
//! baselines.
//!
//! The honest prover commits to the measured image of the superposition
//!
//! ```text
//! |phi> = 2^{-(1 + n log2 q + m r)/2} sum_{b,x,z} |b, x, z + A x + b u>
//! ```
//!
//! with `z` ranging over the window `I^m`, `I = {-2^{r-1}, ..., 2^{r-1}-1}`.
//! Two implementations cover the two scales this laboratory runs at:
//!
//! - [`ExactClawProver`] drives the sparse-statevector simulator and
//!   Born-rule measurements directly; it is exact but only fits tiny
//!   `(n, m, q)`.
//! - [`LazyClawProver`] samples the same outcome distributions in closed
//!   form: a uniform `(b, x, z)` fixes the committed `y = A x + b u + z`
//!   (the exact Born marginal), and the collapsed state is the claw pair
//!   `(|0, x0> + |1, x0 - s>)/sqrt(2)` restricted to the branches whose
//!   window offsets `y - A x0` and `y - A x0 - e` stay inside
//!   `I^m`. Two present branches give the textbook claw: a fair branch
//!   coin under `r = 0`, and under `r = 1` a uniform `d` with
//!   `c = <d, J(x0) xor J(x0 - s)>` exactly. One present branch gives a
//!   basis state: the sampled `(b, x)` under `r = 0` and an
//!   uninformative uniform `(c, d)` under `r = 1`. Deciding which
//!   branches are present takes the witness `(s, e)`, so this prover is
//!   flagged `simulation_only`; the agreement of the two models is
//!   pinned down distribution-by-distribution in the exactness tests.
//!
//! The classical baselines are the soundness-side reference points: a
//! strategy that always wins `r = 0` ([`PassR0Prover`]), a uniformly
//! random answerer ([`RandomProver`]), and a verifier-colluding oracle
//! that wins both challenges ([`OracleProver`], the rate-1.0 anchor).

use crate::error::{ProtocolError, ProtocolResult};
use crate::gset::{equation_bit, in_g_bx, in_g_sbx};
use crate::messages::{Challenge, Response};
use quantum_sim::{
    measure_committed_basis, measure_last_register, prepare_phi, SimError, SparseState,
};
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use zq_lattice::{LweInstance, LweWitness, ProtocolParams, ZqVector};

/// A prover strategy, drivable one message at a time.
pub trait Prover {
    /// Strategy name, used in reports and transcripts.
    fn name(&self) -> &'static str;

    /// True when the strategy uses powers only a simulation grants
    /// (holding the verifier's witness).
    fn simulation_only(&self) -> bool;

    /// Step 2: commits to an image vector for the given instance.
    fn commit(&mut self, instance: &LweInstance, rng: &mut dyn RngCore)
        -> ProtocolResult<ZqVector>;

    /// Step 4: answers the challenge from the committed state.
    fn respond(&mut self, challenge: Challenge, rng: &mut dyn RngCore)
        -> ProtocolResult<Response>;

    /// Clones the committed state for rewinding, when the strategy
    /// admits it. Every transcript produced through a snapshot is
    /// simulation-only by definition.
    fn snapshot(&self) -> Option<Box<dyn Prover>>;
}

/// Uniform bit vector of the given length.
fn random_bits(len: usize, rng: &mut dyn RngCore) -> Vec<u8> {
    (0..len).map(|_| rng.gen_range(0..2u8)).collect()
}

/// Whether every centered coordinate lies in `[-h, h)`.
fn in_window(v: &ZqVector, h: u64) -> bool {
    let h = h as i64;
    v.centered().iter().all(|&c| c >= -h && c < h)
}

fn not_committed(expected: &'static str) -> ProtocolError {
    ProtocolError::PhaseMismatch { expected, found: "no commitment" }
}

// -------------------------------------------------------------------
// exact simulator-backed prover
// -------------------------------------------------------------------

/// Honest prover running the sparse-statevector simulation end to end.
#[derive(Debug, Clone)]
pub struct ExactClawProver {
    params: ProtocolParams,
    allow_unchecked: bool,
    committed: Option<SparseState>,
}

impl ExactClawProver {
    /// Builds the prover; `allow_unchecked` forwards to the preparation
    /// precondition check for exploratory runs.
    pub fn new(params: ProtocolParams, allow_unchecked: bool) -> Self {
        Self { params, allow_unchecked, committed: None }
    }
}

impl Prover for ExactClawProver {
    fn name(&self) -> &'static str {
        "quantum-exact"
    }

    fn simulation_only(&self) -> bool {
        false
    }

    fn commit(
        &mut self,
        instance: &LweInstance,
        rng: &mut dyn RngCore,
    ) -> ProtocolResult<ZqVector> {
        let (state, _budget) = prepare_phi(instance, &self.params, self.allow_unchecked)?;
        let (y, collapsed, _record) = measure_last_register(&state, self.params.m, rng)?;
        self.committed = Some(collapsed);
        Ok(y)
    }

    fn respond(
        &mut self,
        challenge: Challenge,
        rng: &mut dyn RngCore,
    ) -> ProtocolResult<Response> {
        let state = self.committed.as_ref().ok_or_else(|| not_committed("committed"))?;
        match challenge.bit() {
            0 => {
                let (b, x, _record) = measure_committed_basis(state, self.params.n, rng)?;
                Ok(Response::Preimage { b: b as u8, x })
            }
            _ => {
                let (c, d, _record) = quantum_sim::hadamard_measure(state, self.params.n, rng)?;
                Ok(Response::Equation { c: c as u8, d })
            }
        }
    }

    fn snapshot(&self) -> Option<Box<dyn Prover>> {
        Some(Box::new(self.clone()))
    }
}

// -------------------------------------------------------------------
// collapsed-bookkeeping honest prover
// -------------------------------------------------------------------

/// What the lazy prover holds after its commitment measurement.
#[derive(Debug, Clone)]
enum LazyCommit {
    /// Both claw branches survived the window: the state is
    /// `(|0, x0> + |1, x0 - s>)/sqrt(2)`.
    Pair { x0: ZqVector },
    /// Only the sampled branch survived: a computational basis state.
    Single { b: u8, x: ZqVector },
}

/// Honest prover that samples measurement outcomes in closed form
/// instead of materializing the state; needs the witness to know which
/// claw branches its commitment kept.
#[derive(Debug, Clone)]
pub struct LazyClawProver {
    params: ProtocolParams,
    s: ZqVector,
    e: ZqVector,
    halfwidth: u64,
    committed: Option<LazyCommit>,
}

impl LazyClawProver {
    /// Builds the prover; fails when the parameters admit no window.
    pub fn new(params: ProtocolParams, witness: &LweWitness) -> ProtocolResult<Self> {
        let halfwidth = params.window_halfwidth()?.ok_or(SimError::MissingWindow)?;
        Ok(Self {
            params,
            s: witness.s.clone(),
            e: witness.e.clone(),
            halfwidth,
            committed: None,
        })
    }

    /// The claw branch pair `(x0, x0 - s)` when both survived.
    pub fn committed_pair(&self) -> Option<&ZqVector> {
        match &self.committed {
            Some(LazyCommit::Pair { x0 }) => Some(x0),
            _ => None,
        }
    }
}

impl Prover for LazyClawProver {
    fn name(&self) -> &'static str {
        "quantum"
    }

    fn simulation_only(&self) -> bool {
        true
    }

    fn commit(
        &mut self,
        instance: &LweInstance,
        rng: &mut dyn RngCore,
    ) -> ProtocolResult<ZqVector> {
        let a = &instance.matrix;
        let q = self.params.q;
        let expected_u = a.mul_vec(&self.s)?.add(&self.e)?;
        if expected_u != instance.u {
            return Err(ProtocolError::ResponseShape {
                detail: "witness does not explain the instance's u".into(),
            });
        }

        // Sample the commitment measurement: a uniform basis point
        // (b, x, z) of |phi> determines y = A x + b u + z.
        let b = rng.gen_range(0..2u8);
        let x = ZqVector::uniform(q, self.params.n, rng)?;
        let h = self.halfwidth as i64;
        let z_centered: Vec<i64> =
            (0..self.params.m).map(|_| rng.gen_range(-h..h)).collect();
        let z = ZqVector::from_centered(q, &z_centered)?;
        let mut y = a.mul_vec(&x)?.add(&z)?;
        if b == 1 {
            y = y.add(&instance.u)?;
        }

        // The collapsed support is the claw pair restricted to branches
        // whose window offsets survived: branch 0 at x0 with offset
        // y - A x0, branch 1 at x0 - s with offset (y - A x0) - e.
        let x0 = if b == 0 { x.clone() } else { x.add(&self.s)? };
        let offset0 = y.sub(&a.mul_vec(&x0)?)?;
        let offset1 = offset0.sub(&self.e)?;
        let present0 = in_window(&offset0, self.halfwidth);
        let present1 = in_window(&offset1, self.halfwidth);
        debug_assert!(
            if b == 0 { present0 } else { present1 },
            "the sampled branch is inside the window by construction"
        );
        self.committed = Some(if present0 && present1 {
            LazyCommit::Pair { x0 }
        } else {
            LazyCommit::Single { b, x }
        });
        Ok(y)
    }

    fn respond(
        &mut self,
        challenge: Challenge,
        rng: &mut dyn RngCore,
    ) -> ProtocolResult<Response> {
        let committed = self.committed.as_ref().ok_or_else(|| not_committed("committed"))?;
        match (challenge.bit(), committed) {
            (0, LazyCommit::Pair { x0 }) => {
                // Basis measurement of the claw: a fair coin between the
                // two branches.
                if rng.gen_range(0..2u8) == 0 {
                    Ok(Response::Preimage { b: 0, x: x0.clone() })
                } else {
                    Ok(Response::Preimage { b: 1, x: x0.sub(&self.s)? })
                }
            }
            (0, LazyCommit::Single { b, x }) => {
                Ok(Response::Preimage { b: *b, x: x.clone() })
            }
            (_, LazyCommit::Pair { x0 }) => {
                // Hadamard measurement of the claw: d is uniform and c
                // matches the encoding difference exactly.
                let d = random_bits(self.params.d_bits(), rng);
                let c = equation_bit(&d, x0, &self.s)?;
                Ok(Response::Equation { c, d })
            }
            (_, LazyCommit::Single { .. }) => {
                // Hadamard measurement of a basis state: uniform and
                // independent.
                let c = rng.gen_range(0..2u8);
                let d = random_bits(self.params.d_bits(), rng);
                Ok(Response::Equation { c, d })
            }
        }
    }

    fn snapshot(&self) -> Option<Box<dyn Prover>> {
        Some(Box::new(self.clone()))
    }
}

// -------------------------------------------------------------------
// classical baselines
// -------------------------------------------------------------------

/// Classical strategy that always wins the `r = 0` challenge: commit to
/// an exact image `y = A x` and reveal `x`; under `r = 1` guess `c` and
/// filter `d` into the half-range set `G_{0,x}` it can compute alone.
#[derive(Debug, Clone)]
pub struct PassR0Prover {
    params: ProtocolParams,
    committed: Option<ZqVector>,
}

impl PassR0Prover {
    /// Builds the baseline.
    pub fn new(params: ProtocolParams) -> Self {
        Self { params, committed: None }
    }
}

impl Prover for PassR0Prover {
    fn name(&self) -> &'static str {
        "pass-r0"
    }

    fn simulation_only(&self) -> bool {
        false
    }

    fn commit(
        &mut self,
        instance: &LweInstance,
        rng: &mut dyn RngCore,
    ) -> ProtocolResult<ZqVector> {
        let x = ZqVector::uniform(self.params.q, self.params.n, rng)?;
        let y = instance.matrix.mul_vec(&x)?;
        self.committed = Some(x);
        Ok(y)
    }

    fn respond(
        &mut self,
        challenge: Challenge,
        rng: &mut dyn RngCore,
    ) -> ProtocolResult<Response> {
        let x = self.committed.as_ref().ok_or_else(|| not_committed("committed"))?;
        match challenge.bit() {
            0 => Ok(Response::Preimage { b: 0, x: x.clone() }),
            _ => {
                let c = rng.gen_range(0..2u8);
                let d = loop {
                    let candidate = random_bits(self.params.d_bits(), rng);
                    if in_g_bx(&candidate, 0, x)? {
                        break candidate;
                    }
                };
                Ok(Response::Equation { c, d })
            }
        }
    }

    fn snapshot(&self) -> Option<Box<dyn Prover>> {
        Some(Box::new(self.clone()))
    }
}

/// Strategy that answers every message uniformly at random.
#[derive(Debug, Clone)]
pub struct RandomProver {
    params: ProtocolParams,
}

impl RandomProver {
    /// Builds the baseline.
    pub fn new(params: ProtocolParams) -> Self {
        Self { params }
    }
}

impl Prover for RandomProver {
    fn name(&self) -> &'static str {
        "random"
    }

    fn simulation_only(&self) -> bool {
        false
    }

    fn commit(
        &mut self,
        _instance: &LweInstance,
        rng: &mut dyn RngCore,
    ) -> ProtocolResult<ZqVector> {
        Ok(ZqVector::uniform(self.params.q, self.params.m, rng)?)
    }

    fn respond(
        &mut self,
        challenge: Challenge,
        rng: &mut dyn RngCore,
    ) -> ProtocolResult<Response> {
        match challenge.bit() {
            0 => Ok(Response::Preimage {
                b: rng.gen_range(0..2u8),
                x: ZqVector::uniform(self.params.q, self.params.n, rng)?,
            }),
            _ => Ok(Response::Equation {
                c: rng.gen_range(0..2u8),
                d: random_bits(self.params.d_bits(), rng),
            }),
        }
    }

    fn snapshot(&self) -> Option<Box<dyn Prover>> {
        Some(Box::new(self.clone()))
    }
}

/// Verifier-colluding oracle: knows `s`, commits to an exact image, and
/// answers both challenges perfectly. Upper anchor with rate 1.0.
#[derive(Debug, Clone)]
pub struct OracleProver {
    params: ProtocolParams,
    s: ZqVector,
    committed: Option<ZqVector>,
}

impl OracleProver {
    /// Builds the anchor from the verifier's secret.
    pub fn new(params: ProtocolParams, s: ZqVector) -> Self {
        Self { params, s, committed: None }
    }
}

impl Prover for OracleProver {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn simulation_only(&self) -> bool {
        true
    }

    fn commit(
        &mut self,
        instance: &LweInstance,
        rng: &mut dyn RngCore,
    ) -> ProtocolResult<ZqVector> {
        let x0 = ZqVector::uniform(self.params.q, self.params.n, rng)?;
        let y = instance.matrix.mul_vec(&x0)?;
        self.committed = Some(x0);
        Ok(y)
    }

    fn respond(
        &mut self,
        challenge: Challenge,
        rng: &mut dyn RngCore,
    ) -> ProtocolResult<Response> {
        let x0 = self.committed.as_ref().ok_or_else(|| not_committed("committed"))?;
        match challenge.bit() {
            0 => Ok(Response::Preimage { b: 0, x: x0.clone() }),
            _ => {
                let d = loop {
                    let candidate = random_bits(self.params.d_bits(), rng);
                    if in_g_sbx(&candidate, &self.s, 0, x0)? {
                        break candidate;
                    }
                };
                let c = equation_bit(&d, x0, &self.s)?;
                Ok(Response::Equation { c, d })
            }
        }
    }

    fn snapshot(&self) -> Option<Box<dyn Prover>> {
        Some(Box::new(self.clone()))
    }
}

// -------------------------------------------------------------------
// strategy selection
// -------------------------------------------------------------------

/// Named prover strategies the runner can instantiate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProverSpec {
    /// Honest quantum model (collapsed bookkeeping; simulation-only).
    Quantum,
    /// Classical baseline that always wins `r = 0`.
    PassR0,
    /// Uniformly random answerer.
    Random,
    /// Verifier-colluding perfect answerer.
    Oracle,
}

impl ProverSpec {
    /// Stable name, matching the CLI spelling.
    pub fn name(&self) -> &'static str {
        match self {
            ProverSpec::Quantum => "quantum",
            ProverSpec::PassR0 => "pass_r0",
            ProverSpec::Random => "random",
            ProverSpec::Oracle => "oracle",
        }
    }

    /// All selectable strategies.
    pub fn all() -> [ProverSpec; 4] {
        [ProverSpec::Quantum, ProverSpec::PassR0, ProverSpec::Random, ProverSpec::Oracle]
    }
}

impl std::str::FromStr for ProverSpec {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        match text {
            "quantum" => Ok(ProverSpec::Quantum),
            "pass_r0" | "pass-r0" => Ok(ProverSpec::PassR0),
            "random" => Ok(ProverSpec::Random),
            "oracle" => Ok(ProverSpec::Oracle),
            other => Err(format!(
                "unknown prover '{other}' (expected quantum, pass_r0, random, or oracle)"
            )),
        }
    }
}

/// Instantiates a strategy; quantum and oracle strategies collude with
/// the verifier through the witness, which their flags record.
pub fn build_prover(
    spec: ProverSpec,
    params: &ProtocolParams,
    witness: &LweWitness,
) -> ProtocolResult<Box<dyn Prover>> {
    Ok(match spec {
        ProverSpec::Quantum => Box::new(LazyClawProver::new(params.clone(), witness)?),
        ProverSpec::PassR0 => Box::new(PassR0Prover::new(params.clone())),
        ProverSpec::Random => Box::new(RandomProver::new(params.clone())),
        ProverSpec::Oracle => Box::new(OracleProver::new(params.clone(), witness.s.clone())),
    })
}
