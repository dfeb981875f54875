//! Error taxonomy for configuration, orchestration, and the command line.
//!
//! Configuration and usage problems map to process exit code 2; failed
//! checks (suite criteria, replay mismatches, depth budgets) are not
//! errors at all — they are reported and mapped to exit code 1.

use thiserror::Error;

/// Any failure while loading configuration or orchestrating runs.
#[derive(Debug, Error)]
pub enum HarnessError {
    /// A preset file could not be read.
    #[error("cannot read config {path}: {source}")]
    ConfigRead {
        path: String,
        #[source]
        source: std::io::Error,
    },
    /// A preset file does not match the schema.
    #[error("config {path}: {detail}")]
    ConfigSchema { path: String, detail: String },
    /// A schema-valid field carries an unusable value.
    #[error("config {path}: field `{field}`: {detail}")]
    ConfigValue { path: String, field: &'static str, detail: String },
    /// The requested preset is neither built in nor a readable file.
    #[error("unknown preset `{name}`; built-in presets: {available}")]
    UnknownPreset { name: String, available: String },
    /// A command needs a capability the preset does not provide.
    #[error("preset `{preset}` violates guard `{guard}`: {detail}")]
    Guard { preset: String, guard: &'static str, detail: String },
    /// An environment variable carries an unusable value.
    #[error("environment variable {name}: {detail}")]
    Environment { name: &'static str, detail: String },

    #[error(transparent)]
    Lattice(#[from] zq_lattice::ZqError),
    #[error(transparent)]
    Simulator(#[from] quantum_sim::SimError),
    #[error(transparent)]
    Protocol(#[from] protocol::ProtocolError),
    #[error(transparent)]
    Depth(#[from] depth_compiler::DepthError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Shorthand result for harness operations.
pub type HarnessResult<T> = Result<T, HarnessError>;
