//! The interactive test rounds: verifier, provers, extraction, replay.
//!
//! One trial of the two-message test, with everything a desk-scale
//! simulation needs to judge it honestly:
//!
//! ```text
//! verifier                                prover
//! --------                                ------
//! (A, t_A) <- GENTRAP, s, e ~ D^m
//! u = A s + e              --(A, u)-->    commit y
//!                          <---(y)----
//! r ~ {0,1}                ---(r)---->    r = 0: reveal (b, x)
//!                          <-(answer)-    r = 1: reveal (c, d)
//! accept / reject(reason)
//! ```
//!
//! The pieces:
//!
//! - [`gset`]: the dense "good d" sets and the equation bit they guard.
//! - [`verifier`]: the forward-only state machine and the pure decision
//!   procedure, reusable for offline re-verification.
//! - [`provers`]: honest quantum models at two fidelities (exact sparse
//!   simulation, and closed-form collapsed bookkeeping that needs the
//!   witness and is flagged `simulation_only`), plus classical
//!   baselines bracketing them from below and above.
//! - [`extract`]: the rewinding extractor and the hardcore-tuple
//!   dichotomy it feeds.
//! - [`runner`] / [`seed`] / [`stats`]: seeded trials, acceptance-rate
//!   estimation with Wilson intervals, JSONL transcript streams, and
//!   bit-exact replay.

pub mod error;
pub mod extract;
pub mod gset;
pub mod messages;
pub mod provers;
pub mod runner;
pub mod seed;
pub mod stats;
pub mod verifier;

pub use error::{ProtocolError, ProtocolResult};
pub use extract::{classify_tuple, extract_hardcore_tuple, Extraction, HardcoreTuple, TupleClass};
pub use gset::{all_bit_vectors, all_vectors, claw_mask, equation_bit, i_map, in_g_bx, in_g_sbx};
pub use messages::{read_transcripts, Challenge, RejectReason, Response, Transcript, Verdict};
pub use provers::{
    build_prover, ExactClawProver, LazyClawProver, OracleProver, PassR0Prover, Prover,
    ProverSpec, RandomProver,
};
pub use runner::{
    estimate_pass_rate, replay_transcripts, run_trial, RateReport, ReplayMismatch, ReplayReport,
};
pub use seed::derive_rng;
pub use stats::{wilson_interval, RateEstimate};
pub use verifier::{judge_response, reverify_decision, Verifier};
