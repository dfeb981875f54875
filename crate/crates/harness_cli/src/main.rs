//! `qlwe`: trapdoor keys, seeded protocol runs with transcript capture,
//! verification suites, fanout depth surveys, and transcript replay.
//!
//! Exit codes: `0` success, `1` a verification failed (suite check,
//! replay mismatch, depth budget), `2` usage, configuration, or guard
//! errors. The master seed resolves as `--seed`, then `QLWE_SEED`,
//! then the preset default.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use serde_json::json;

use harness_cli::{
    depth_budget_survey, pooled_pass_rate, resolve_preset, run_suite, HarnessError,
    HarnessResult, Preset, RunReport, SuiteKind,
};
use protocol::{replay_transcripts, ProverSpec};
use zq_lattice::gentrap;

#[derive(Parser)]
#[command(name = "qlwe", version, about = "Laboratory for a claw-based interactive protocol")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a trapdoor keypair from a preset's shape.
    Keygen {
        /// Built-in preset name or path to a preset file.
        #[arg(long)]
        params: String,
        /// Master seed; overrides QLWE_SEED and the preset default.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the keypair document here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run seeded trials and report acceptance rates.
    Run {
        /// Built-in preset name or path to a preset file.
        #[arg(long)]
        params: String,
        /// Prover strategy: quantum, pass_r0, random, or oracle.
        #[arg(long, default_value = "quantum", value_parser = parse_prover)]
        prover: ProverSpec,
        /// Trial count; defaults to the preset's.
        #[arg(long)]
        trials: Option<u64>,
        /// Master seed; overrides QLWE_SEED and the preset default.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the transcript stream (JSON lines) here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the run report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Worker threads; the stream is identical at any count.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Run one named check suite over a preset.
    Suite {
        /// Which suite: invariants, protocol, depth, or extract.
        #[arg(long, value_enum)]
        kind: SuiteKind,
        /// Built-in preset name or path to a preset file.
        #[arg(long)]
        params: String,
        /// Master seed; overrides QLWE_SEED and the preset default.
        #[arg(long)]
        seed: Option<u64>,
        /// Trial count for rate checks; defaults to the preset's.
        #[arg(long)]
        trials: Option<u64>,
        /// Keep the protocol suite's transcript stream here.
        #[arg(long)]
        transcripts: Option<PathBuf>,
        /// Also write the suite report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Depth-compiler reports.
    Depthc {
        #[command(subcommand)]
        command: DepthcCommand,
    },
    /// Re-judge a transcript file and demand identical verdicts.
    Replay {
        /// Transcript stream written by `run` or `suite`.
        file: PathBuf,
    },
}

#[derive(Subcommand)]
enum DepthcCommand {
    /// Survey fanout depth resources up to a maximum width.
    Report {
        /// Largest fanout width to survey.
        #[arg(long, default_value_t = 64)]
        max_m: usize,
    },
}

fn parse_prover(text: &str) -> Result<ProverSpec, String> {
    text.parse()
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn dispatch(cli: Cli) -> HarnessResult<i32> {
    match cli.command {
        Command::Keygen { params, seed, out } => keygen(&params, seed, out.as_deref()),
        Command::Run { params, prover, trials, seed, out, report, workers } => {
            run(&params, prover, trials, seed, out.as_deref(), report.as_deref(), workers)
        }
        Command::Suite { kind, params, seed, trials, transcripts, out } => {
            suite(kind, &params, seed, trials, transcripts.as_deref(), out.as_deref())
        }
        Command::Depthc { command: DepthcCommand::Report { max_m } } => depthc_report(max_m),
        Command::Replay { file } => replay(&file),
    }
}

/// `--seed`, then `QLWE_SEED`, then the preset default.
fn resolve_seed(flag: Option<u64>, preset: &Preset) -> HarnessResult<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("QLWE_SEED") {
        Ok(text) => text.trim().parse().map_err(|_| HarnessError::Environment {
            name: "QLWE_SEED",
            detail: format!("expected an unsigned 64-bit integer, found {text:?}"),
        }),
        Err(std::env::VarError::NotPresent) => Ok(preset.default_seed),
        Err(e) => {
            Err(HarnessError::Environment { name: "QLWE_SEED", detail: e.to_string() })
        }
    }
}

/// Pretty-prints to stdout and mirrors to a file when asked.
fn emit(value: &impl Serialize, copy: Option<&Path>) -> HarnessResult<()> {
    let text = serde_json::to_string_pretty(value)?;
    println!("{text}");
    if let Some(path) = copy {
        std::fs::write(path, format!("{text}\n"))?;
    }
    Ok(())
}

fn keygen(params: &str, seed: Option<u64>, out: Option<&Path>) -> HarnessResult<i32> {
    let preset = resolve_preset(params)?;
    let p = preset.require_trapdoor_shape()?;
    let seed = resolve_seed(seed, &preset)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let keypair = gentrap(p.n, p.m, p.q, &mut rng)?;
    let document = json!({
        "preset": preset.name,
        "config_hash": preset.config_hash,
        "seed": seed,
        "keypair": keypair,
    });
    emit(&document, out)?;
    Ok(0)
}

fn run(
    params: &str,
    prover: ProverSpec,
    trials: Option<u64>,
    seed: Option<u64>,
    out: Option<&Path>,
    report_path: Option<&Path>,
    workers: usize,
) -> HarnessResult<i32> {
    let preset = resolve_preset(params)?;
    let p = preset.require_trapdoor_shape()?;
    if prover == ProverSpec::Quantum {
        preset.require_window()?;
    }
    let seed = resolve_seed(seed, &preset)?;
    let trials = trials.unwrap_or(preset.default_trials);

    let mut file = out.map(|path| File::create(path).map(BufWriter::new)).transpose()?;
    let sink = file.as_mut().map(|f| f as &mut dyn Write);
    let rates = pooled_pass_rate(p, prover, trials, seed, workers.max(1), sink)?;
    if let Some(mut f) = file {
        f.flush()?;
    }

    let report = RunReport::new(
        &preset,
        workers.max(1),
        trials,
        out.map(|p| p.display().to_string()),
        rates,
    );
    emit(&report, report_path)?;
    Ok(0)
}

fn suite(
    kind: SuiteKind,
    params: &str,
    seed: Option<u64>,
    trials: Option<u64>,
    transcripts: Option<&Path>,
    out: Option<&Path>,
) -> HarnessResult<i32> {
    let preset = resolve_preset(params)?;
    let seed = resolve_seed(seed, &preset)?;
    let trials = trials.unwrap_or(preset.default_trials);

    let mut file = transcripts.map(|path| File::create(path).map(BufWriter::new)).transpose()?;
    let sink = file.as_mut().map(|f| f as &mut dyn Write);
    let report = run_suite(kind, &preset, seed, trials, sink)?;
    if let Some(mut f) = file {
        f.flush()?;
    }

    emit(&report, out)?;
    Ok(if report.passed { 0 } else { 1 })
}

fn depthc_report(max_m: usize) -> HarnessResult<i32> {
    let survey = depth_budget_survey(max_m.max(1))?;
    emit(&survey, None)?;
    Ok(if survey.within_budget { 0 } else { 1 })
}

fn replay(file: &Path) -> HarnessResult<i32> {
    let reader = BufReader::new(File::open(file)?);
    let report = replay_transcripts(reader)?;
    emit(&report, None)?;
    Ok(if report.all_match() { 0 } else { 1 })
}
