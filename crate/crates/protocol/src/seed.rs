//! Deterministic per-trial randomness.
//!
//! Every random stream is derived by hashing `(master seed, tag, trial
//! index)` into a ChaCha20 seed:
//!
//! ```text
//! seed = SHA-256("qlwe-seed/v1" || master_le64 || len(tag)_le64 || tag || trial_le64)
//! ```
//!
//! so trials are independent of execution order and a run can be
//! reproduced — or fanned out across workers — from its master seed
//! alone. Tags separate the verifier's and the prover's draws so
//! neither side's sampling can perturb the other.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

/// Version prefix: bump when the derivation scheme changes.
const DOMAIN: &[u8] = b"qlwe-seed/v1";

/// Derives the ChaCha20 stream for `(master_seed, tag, trial)`.
pub fn derive_rng(master_seed: u64, tag: &str, trial: u64) -> ChaCha20Rng {
    let mut hasher = Sha256::new();
    hasher.update(DOMAIN);
    hasher.update(master_seed.to_le_bytes());
    hasher.update((tag.len() as u64).to_le_bytes());
    hasher.update(tag.as_bytes());
    hasher.update(trial.to_le_bytes());
    let digest: [u8; 32] = hasher.finalize().into();
    ChaCha20Rng::from_seed(digest)
}
