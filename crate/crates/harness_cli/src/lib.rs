//! Command-line laboratory for the claw-based interactive protocol:
//! preset management, trapdoor key generation, trial running with
//! transcript capture and replay, acceptance-style check suites, and
//! depth reports for the constant-depth circuit compiler.

pub mod config;
pub mod error;
pub mod run;
pub mod suite;

pub use config::{builtin_names, load_config, resolve_preset, DerivedEcho, Preset, PresetMode};
pub use error::{HarnessError, HarnessResult};
pub use run::{pooled_pass_rate, RunReport};
pub use suite::{
    depth_budget_survey, run_suite, DepthSurvey, SuiteCheck, SuiteKind, SuiteReport,
};
