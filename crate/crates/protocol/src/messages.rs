//! Round messages, verdicts, and the transcript wire format.
//!
//! One trial exchanges five messages, serialized as JSON lines with the
//! shape `{"trial": t, "step": 1..5, "payload": {...}}`:
//!
//! ```text
//! step 1  instance    public (A, u) plus the verifier-side material
//!                     (params, keypair, s, e, seed) that re-verification
//!                     of the decision needs
//! step 2  commitment  the prover's image vector y
//! step 3  challenge   the uniform bit r
//! step 4  response    (b, x) for r = 0, (c, d) for r = 1
//! step 5  verdict     accept/reject with a reason code
//! ```
//!
//! Keeping the verifier's secret material in step 1 is what lets a
//! transcript file be re-judged offline: the decision procedure is a
//! pure function of (params, keypair, s, u, y, r, response).

use crate::error::{ProtocolError, ProtocolResult};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use zq_lattice::{ProtocolParams, TrapdoorKeypair, ZqVector};

/// The verifier's challenge bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Challenge(u8);

impl Challenge {
    /// Wraps a bit, rejecting anything else.
    pub fn new(r: u8) -> ProtocolResult<Self> {
        if r > 1 {
            return Err(ProtocolError::NotABit { value: r });
        }
        Ok(Self(r))
    }

    /// The challenge bit.
    pub fn bit(&self) -> u8 {
        self.0
    }
}

/// The prover's step-4 message; the variant must match the challenge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Response {
    /// `r = 0`: a claimed preimage branch `(b, x)`.
    Preimage {
        /// Branch bit.
        b: u8,
        /// Claimed preimage.
        x: ZqVector,
    },
    /// `r = 1`: an equation sample `(c, d)`.
    Equation {
        /// Claimed equation bit.
        c: u8,
        /// Probe bit vector of length `n * ceil(log2 q)`.
        d: Vec<u8>,
    },
}

/// Why a round was rejected, in the order the checks run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    /// `r = 0`: `A x + b u - y` fell outside the acceptance radius.
    PreimageNorm,
    /// `r = 1`: trapdoor inversion of `y` failed outright.
    InversionFailed,
    /// `r = 1`: the inverted point's residual exceeded the radius.
    ResidualNorm,
    /// `r = 1`: `c` disagreed with `<d, J(x0) xor J(x0 - s)>`.
    EquationMismatch,
    /// `r = 1`: `d` was outside the good set `G_{s,0,x0}`.
    OutsideGoodSet,
}

/// Final decision for one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    /// Whether the verifier accepted.
    pub accept: bool,
    /// First failing check on rejection.
    pub reason: Option<RejectReason>,
    /// True when the trial used simulation-privileged powers (a prover
    /// holding the witness, or snapshot-based rewinding).
    pub simulation_only: bool,
}

/// Complete record of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    /// Trial index within its run.
    pub trial: u64,
    /// Master seed of the run that produced the trial.
    pub master_seed: u64,
    /// Name of the prover strategy.
    pub prover: String,
    /// Parameter set in force.
    pub params: ProtocolParams,
    /// Public matrix and trapdoor.
    pub keypair: TrapdoorKeypair,
    /// Public image vector `u = A s + e`.
    pub u: ZqVector,
    /// Verifier secret.
    pub s: ZqVector,
    /// Verifier noise vector.
    pub e: ZqVector,
    /// Step 2: the prover's commitment `y`.
    pub commitment: ZqVector,
    /// Step 3: the challenge bit.
    pub challenge: Challenge,
    /// Step 4: the prover's response.
    pub response: Response,
    /// Step 5: the decision.
    pub verdict: Verdict,
}

/// One wire line.
#[derive(Debug, Serialize, Deserialize)]
struct WireLine {
    trial: u64,
    step: u8,
    payload: serde_json::Value,
}

/// Step-1 payload: everything re-verification needs.
#[derive(Debug, Serialize, Deserialize)]
struct SetupPayload {
    params: ProtocolParams,
    master_seed: u64,
    prover: String,
    keypair: TrapdoorKeypair,
    u: ZqVector,
    s: ZqVector,
    e: ZqVector,
}


impl Transcript {
    /// Serializes the five wire lines of this trial.
    pub fn to_lines(&self) -> ProtocolResult<Vec<String>> {
        let payloads = [
            serde_json::json!({
                "params": &self.params,
                "master_seed": self.master_seed,
                "prover": &self.prover,
                "keypair": &self.keypair,
                "u": &self.u,
                "s": &self.s,
                "e": &self.e,
            }),
            serde_json::json!({ "y": &self.commitment }),
            serde_json::json!({ "r": self.challenge.bit() }),
            serde_json::to_value(&self.response)?,
            serde_json::to_value(&self.verdict)?,
        ];
        payloads
            .into_iter()
            .enumerate()
            .map(|(i, payload)| {
                let line =
                    WireLine { trial: self.trial, step: (i + 1) as u8, payload };
                Ok(serde_json::to_string(&line)?)
            })
            .collect()
    }

    /// Writes the five wire lines to a sink.
    pub fn write_jsonl(&self, mut sink: impl Write) -> ProtocolResult<()> {
        for line in self.to_lines()? {
            writeln!(sink, "{line}")?;
        }
        Ok(())
    }

    /// Rebuilds one trial from its five wire lines, in step order.
    fn from_lines(lines: &[WireLine]) -> ProtocolResult<Self> {
        if lines.len() != 5 {
            return Err(ProtocolError::TranscriptFormat {
                detail: format!("expected 5 steps per trial, found {}", lines.len()),
            });
        }
        let trial = lines[0].trial;
        for (i, line) in lines.iter().enumerate() {
            if line.step != (i + 1) as u8 || line.trial != trial {
                return Err(ProtocolError::TranscriptFormat {
                    detail: format!(
                        "trial {trial}: line {} is (trial {}, step {}), expected step {}",
                        i,
                        line.trial,
                        line.step,
                        i + 1
                    ),
                });
            }
        }
        let setup: SetupPayload = serde_json::from_value(lines[0].payload.clone())?;
        #[derive(Deserialize)]
        struct CommitPayload {
            y: ZqVector,
        }
        #[derive(Deserialize)]
        struct ChallengePayload {
            r: u8,
        }
        let commit: CommitPayload = serde_json::from_value(lines[1].payload.clone())?;
        let challenge: ChallengePayload = serde_json::from_value(lines[2].payload.clone())?;
        let response: Response = serde_json::from_value(lines[3].payload.clone())?;
        let verdict: Verdict = serde_json::from_value(lines[4].payload.clone())?;
        Ok(Self {
            trial,
            master_seed: setup.master_seed,
            prover: setup.prover,
            params: setup.params,
            keypair: setup.keypair,
            u: setup.u,
            s: setup.s,
            e: setup.e,
            commitment: commit.y,
            challenge: Challenge::new(challenge.r)?,
            response,
            verdict,
        })
    }
}

/// Reads a whole transcript stream, strict about grouping and order.
pub fn read_transcripts(reader: impl BufRead) -> ProtocolResult<Vec<Transcript>> {
    let mut all = Vec::new();
    let mut group: Vec<WireLine> = Vec::with_capacity(5);
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let wire: WireLine = serde_json::from_str(&line).map_err(|e| {
            ProtocolError::TranscriptFormat { detail: format!("line {}: {e}", idx + 1) }
        })?;
        group.push(wire);
        if group.len() == 5 {
            all.push(Transcript::from_lines(&group)?);
            group.clear();
        }
    }
    if !group.is_empty() {
        return Err(ProtocolError::TranscriptFormat {
            detail: format!("dangling {}-line group at end of stream", group.len()),
        });
    }
    Ok(all)
}
