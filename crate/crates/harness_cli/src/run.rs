//! Run orchestration on top of the serial trial loop: a deterministic
//! worker pool and the run-level report envelope.
//!
//! Trial `t` goes to lane `t mod w`, and every trial derives all of its
//! randomness from `(master seed, trial)`, so the transcript stream and
//! every statistic are byte-identical to the serial route no matter how
//! many workers run. The serial loop stays in place as the reference
//! route; the pool re-aggregates independently and is tested against
//! it line for line.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::mpsc;
use std::time::Instant;

use protocol::{estimate_pass_rate, run_trial, ProverSpec, RateEstimate, RateReport, Transcript};
use serde::Serialize;
use zq_lattice::ProtocolParams;

use crate::config::Preset;
use crate::error::{HarnessError, HarnessResult};

/// Capacity of each lane's reorder buffer, in transcripts.
const LANE_BUFFER: usize = 32;

/// Envelope around a rate report with everything needed to reproduce
/// and attribute the run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    /// Preset the parameters came from.
    pub preset: String,
    /// SHA-256 of the preset text.
    pub config_hash: String,
    /// Version of this binary.
    pub code_version: &'static str,
    /// Worker threads used.
    pub workers: usize,
    /// Trials requested.
    pub trials: u64,
    /// Where the transcript stream was written, if anywhere.
    pub transcripts_path: Option<String>,
    /// The aggregated rates.
    #[serde(flatten)]
    pub rates: RateReport,
}

impl RunReport {
    /// Wraps aggregated rates with the run's provenance.
    pub fn new(
        preset: &Preset,
        workers: usize,
        trials: u64,
        transcripts_path: Option<String>,
        rates: RateReport,
    ) -> Self {
        Self {
            preset: preset.name.clone(),
            config_hash: preset.config_hash.clone(),
            code_version: env!("CARGO_PKG_VERSION"),
            workers,
            trials,
            transcripts_path,
            rates,
        }
    }
}

/// Runs `trials` seeded trials across `workers` threads, streaming the
/// transcript wire lines to `sink` in trial order.
///
/// With one worker this delegates to the serial reference loop; with
/// more it runs the strided pool, whose output must be (and is, by
/// test) indistinguishable from the serial route.
pub fn pooled_pass_rate(
    params: &ProtocolParams,
    spec: ProverSpec,
    trials: u64,
    master_seed: u64,
    workers: usize,
    mut sink: Option<&mut dyn Write>,
) -> HarnessResult<RateReport> {
    if workers <= 1 {
        return Ok(estimate_pass_rate(params, spec, trials, master_seed, sink.take())?);
    }
    let started = Instant::now();
    let lanes = workers.min(trials.max(1) as usize);

    let mut accepts = 0u64;
    let mut per_challenge = [(0u64, 0u64); 2];
    let mut reject_reasons: BTreeMap<String, u64> = BTreeMap::new();
    let mut simulation_only = false;

    std::thread::scope(|scope| -> HarnessResult<()> {
        let mut receivers = Vec::with_capacity(lanes);
        for lane in 0..lanes {
            let (tx, rx) = mpsc::sync_channel(LANE_BUFFER);
            receivers.push(rx);
            scope.spawn(move || {
                let mut trial = lane as u64;
                while trial < trials {
                    let result = run_trial(params, spec, master_seed, trial);
                    let stop = result.is_err();
                    if tx.send(result).is_err() || stop {
                        break;
                    }
                    trial += lanes as u64;
                }
            });
        }
        for trial in 0..trials {
            let transcript: Transcript = receivers[trial as usize % lanes]
                .recv()
                .map_err(|_| HarnessError::Environment {
                    name: "worker pool",
                    detail: format!("the lane for trial {trial} stopped without a result"),
                })??;
            let slot = &mut per_challenge[transcript.challenge.bit() as usize];
            slot.1 += 1;
            if transcript.verdict.accept {
                accepts += 1;
                slot.0 += 1;
            } else if let Some(reason) = transcript.verdict.reason {
                let key = serde_json::to_value(reason)?
                    .as_str()
                    .expect("reason codes serialize as strings")
                    .to_string();
                *reject_reasons.entry(key).or_insert(0) += 1;
            }
            simulation_only |= transcript.verdict.simulation_only;
            if let Some(w) = sink.as_mut() {
                transcript.write_jsonl(&mut **w)?;
            }
        }
        Ok(())
    })?;

    Ok(RateReport {
        prover: spec.name().to_string(),
        master_seed,
        overall: RateEstimate::from_counts(accepts, trials),
        r0: RateEstimate::from_counts(per_challenge[0].0, per_challenge[0].1),
        r1: RateEstimate::from_counts(per_challenge[1].0, per_challenge[1].1),
        reject_reasons,
        simulation_only,
        elapsed_micros: started.elapsed().as_micros() as u64,
    })
}
