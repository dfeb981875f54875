//! Preset configuration: one human-editable key-value file per parameter
//! set, resolved into exact protocol parameters with the derived window
//! exponent and prover bound computed up front and echoed in every report.
//!
//! ```text
//! name = "tiny"            identifies the preset in reports
//! mode = "desk"            desk | strict-symbolic
//! [params]                 exact protocol parameters (desk mode)
//! [symbolic]               recorded asymptotic scalings (strict-symbolic)
//! [defaults]               trial count and master seed used when flags
//!                          and QLWE_SEED are absent
//! ```
//!
//! Rationals (`b_l`, `b_v`, `epsilon`, `c`, `c_squared`) are written as
//! integers, decimal strings, or `"num/den"` fractions; they stay exact
//! all the way into the threshold arithmetic.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use zq_lattice::{ProtocolParams, Ratio};

use crate::error::{HarnessError, HarnessResult};

/// Execution mode of a preset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PresetMode {
    /// Small enough for exhaustive oracles and simulation.
    Desk,
    /// Asymptotic scalings on record; refuses to simulate.
    StrictSymbolic,
}

/// Derived quantities echoed alongside the raw parameters.
#[derive(Debug, Clone, Serialize)]
pub struct DerivedEcho {
    /// Window exponent `r`, when the prover bound admits one.
    pub window_r: Option<u32>,
    /// Window half-width `2^(r-1)`.
    pub window_halfwidth: Option<u64>,
    /// Prover bound `B_P = q / (C sqrt(m n log2 q))`.
    pub b_p: f64,
    /// Bits in the equation vector `d`.
    pub d_bits: usize,
    /// Squared decoding radius of the trapdoor inverter.
    pub invert_radius_sq: f64,
    /// Squared radius of the verifier's norm test.
    pub accept_radius_sq: f64,
    /// Whether `q >= B_V C sqrt(m n log2 q)` holds.
    pub condition_i_holds: bool,
    /// Whether `q >= 8 m B_V C sqrt(m n log2 q) / epsilon` holds.
    pub preparation_precondition_holds: bool,
}

/// A fully resolved preset.
#[derive(Debug, Clone, Serialize)]
pub struct Preset {
    /// Name recorded in the file (and in every report).
    pub name: String,
    /// Desk or strict-symbolic.
    pub mode: PresetMode,
    /// Resolved parameters; present exactly for desk presets.
    pub params: Option<ProtocolParams>,
    /// Recorded asymptotic scalings; present for strict-symbolic presets.
    pub symbolic: BTreeMap<String, String>,
    /// Derived values; present exactly for desk presets.
    pub derived: Option<DerivedEcho>,
    /// Trial count used when no flag overrides it.
    pub default_trials: u64,
    /// Master seed used when neither flag nor QLWE_SEED overrides it.
    pub default_seed: u64,
    /// SHA-256 of the configuration text, hex-encoded.
    pub config_hash: String,
    /// Where the preset came from (`builtin:<name>` or a path).
    pub source: String,
}

impl Preset {
    /// Whether simulating commands may use this preset.
    pub fn desk_runnable(&self) -> bool {
        self.mode == PresetMode::Desk
    }

    /// The resolved parameters, or the `desk_runnable` guard violation.
    pub fn require_params(&self) -> HarnessResult<&ProtocolParams> {
        self.params.as_ref().ok_or_else(|| HarnessError::Guard {
            preset: self.name.clone(),
            guard: "desk_runnable",
            detail: "strict-symbolic presets record scalings but cannot simulate".into(),
        })
    }

    /// Parameters of a preset that must also be trapdoor-shaped
    /// (`m > n ceil(log2 q)`), or the `trapdoor_shape` guard violation.
    pub fn require_trapdoor_shape(&self) -> HarnessResult<&ProtocolParams> {
        let params = self.require_params()?;
        let gadget = params.n * zq_lattice::bit_width(params.q) as usize;
        if params.m <= gadget {
            return Err(HarnessError::Guard {
                preset: self.name.clone(),
                guard: "trapdoor_shape",
                detail: format!(
                    "m = {} must exceed n ceil(log2 q) = {} to carry a trapdoor",
                    params.m, gadget
                ),
            });
        }
        Ok(params)
    }

    /// Parameters of a preset that must also derive a window exponent,
    /// or the `window_exponent` guard violation.
    pub fn require_window(&self) -> HarnessResult<&ProtocolParams> {
        let params = self.require_params()?;
        if params.window_r()?.is_none() {
            return Err(HarnessError::Guard {
                preset: self.name.clone(),
                guard: "window_exponent",
                detail: "B_P < 2: no state-preparation window exists".into(),
            });
        }
        Ok(params)
    }
}

// -------------------------------------------------------------------
// raw schema
// -------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPreset {
    name: String,
    mode: RawMode,
    params: Option<RawParams>,
    symbolic: Option<BTreeMap<String, String>>,
    defaults: Option<RawDefaults>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum RawMode {
    Desk,
    StrictSymbolic,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    lambda: u32,
    ell: u32,
    n: usize,
    m: usize,
    q: u64,
    b_l: RatioField,
    b_v: RatioField,
    epsilon: RatioField,
    c: Option<RatioField>,
    c_squared: Option<RatioField>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDefaults {
    trials: Option<u64>,
    seed: Option<u64>,
}

/// A rational in config: a plain integer, a decimal string, or "num/den".
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RatioField {
    Int(u64),
    Text(String),
}

impl RatioField {
    fn resolve(&self, path: &str, field: &'static str) -> HarnessResult<Ratio> {
        match self {
            RatioField::Int(v) => Ok(Ratio::from_int(*v as u128)),
            RatioField::Text(text) => {
                Ratio::parse(text).map_err(|e| HarnessError::ConfigValue {
                    path: path.to_string(),
                    field,
                    detail: e.to_string(),
                })
            }
        }
    }
}

// -------------------------------------------------------------------
// loading
// -------------------------------------------------------------------

/// Built-in presets shipped with the binary.
const BUILTINS: &[(&str, &str)] = &[
    ("tiny", include_str!("../presets/tiny.toml")),
    ("thm5-desk", include_str!("../presets/thm5-desk.toml")),
    ("proto-n2", include_str!("../presets/proto-n2.toml")),
    ("inv-q8", include_str!("../presets/inv-q8.toml")),
    ("inv-q16", include_str!("../presets/inv-q16.toml")),
    ("inv-q32", include_str!("../presets/inv-q32.toml")),
    ("inv-q64", include_str!("../presets/inv-q64.toml")),
    ("claw-q32-boundary", include_str!("../presets/claw-q32-boundary.toml")),
    ("claw-q64", include_str!("../presets/claw-q64.toml")),
    ("gentrap-stat", include_str!("../presets/gentrap-stat.toml")),
    ("strict-symbolic", include_str!("../presets/strict-symbolic.toml")),
];

/// Names of the built-in presets, in display order.
pub fn builtin_names() -> Vec<&'static str> {
    BUILTINS.iter().map(|(name, _)| *name).collect()
}

/// Loads a preset from an explicit file path.
pub fn load_config(path: &Path) -> HarnessResult<Preset> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::ConfigRead {
        path: path.display().to_string(),
        source,
    })?;
    parse_preset(&text, &path.display().to_string())
}

/// Resolves a `--params` argument: a built-in name or a file path.
pub fn resolve_preset(spec: &str) -> HarnessResult<Preset> {
    if let Some((name, text)) = BUILTINS.iter().find(|(name, _)| *name == spec) {
        return parse_preset(text, &format!("builtin:{name}"));
    }
    let path = Path::new(spec);
    if path.exists() {
        return load_config(path);
    }
    Err(HarnessError::UnknownPreset {
        name: spec.to_string(),
        available: builtin_names().join(", "),
    })
}

/// Parses and fully resolves one preset document.
fn parse_preset(text: &str, source: &str) -> HarnessResult<Preset> {
    let raw: RawPreset = toml::from_str(text).map_err(|e| HarnessError::ConfigSchema {
        path: source.to_string(),
        detail: e.message().to_string(),
    })?;
    let config_hash = hex::encode(Sha256::digest(text.as_bytes()));
    let defaults = raw.defaults.unwrap_or_default();

    let (mode, params, symbolic) = match raw.mode {
        RawMode::Desk => {
            let section = raw.params.ok_or_else(|| HarnessError::ConfigValue {
                path: source.to_string(),
                field: "params",
                detail: "desk presets need a [params] section".into(),
            })?;
            if raw.symbolic.is_some() {
                return Err(HarnessError::ConfigValue {
                    path: source.to_string(),
                    field: "symbolic",
                    detail: "desk presets resolve exact parameters; drop [symbolic]".into(),
                });
            }
            (PresetMode::Desk, Some(build_params(&section, source)?), BTreeMap::new())
        }
        RawMode::StrictSymbolic => {
            if raw.params.is_some() {
                return Err(HarnessError::ConfigValue {
                    path: source.to_string(),
                    field: "params",
                    detail: "strict-symbolic presets record scalings, not exact parameters"
                        .into(),
                });
            }
            let symbolic = raw.symbolic.ok_or_else(|| HarnessError::ConfigValue {
                path: source.to_string(),
                field: "symbolic",
                detail: "strict-symbolic presets need a [symbolic] section".into(),
            })?;
            (PresetMode::StrictSymbolic, None, symbolic)
        }
    };

    let derived = params.as_ref().map(derive_echo).transpose()?;
    Ok(Preset {
        name: raw.name,
        mode,
        params,
        symbolic,
        derived,
        default_trials: defaults.trials.unwrap_or(200),
        default_seed: defaults.seed.unwrap_or(1),
        config_hash,
        source: source.to_string(),
    })
}

/// Builds exact protocol parameters from the raw section.
fn build_params(raw: &RawParams, source: &str) -> HarnessResult<ProtocolParams> {
    let b_l = raw.b_l.resolve(source, "b_l")?;
    let b_v = raw.b_v.resolve(source, "b_v")?;
    let epsilon = raw.epsilon.resolve(source, "epsilon")?;
    let params = match (&raw.c, &raw.c_squared) {
        (Some(c), None) => ProtocolParams::new(
            raw.lambda,
            raw.ell,
            raw.n,
            raw.m,
            raw.q,
            b_l,
            b_v,
            epsilon,
            c.resolve(source, "c")?,
        )?,
        (None, Some(c_sq)) => ProtocolParams::with_c_squared(
            raw.lambda,
            raw.ell,
            raw.n,
            raw.m,
            raw.q,
            b_l,
            b_v,
            epsilon,
            c_sq.resolve(source, "c_squared")?,
        )?,
        (Some(_), Some(_)) => {
            return Err(HarnessError::ConfigValue {
                path: source.to_string(),
                field: "c",
                detail: "give either `c` or `c_squared`, not both".into(),
            })
        }
        (None, None) => {
            return Err(HarnessError::ConfigValue {
                path: source.to_string(),
                field: "c",
                detail: "one of `c` or `c_squared` is required".into(),
            })
        }
    };
    Ok(params)
}

/// Computes the echoed derived quantities.
fn derive_echo(params: &ProtocolParams) -> HarnessResult<DerivedEcho> {
    Ok(DerivedEcho {
        window_r: params.window_r()?,
        window_halfwidth: params.window_halfwidth()?,
        b_p: params.b_p_sq()?.as_f64().sqrt(),
        d_bits: params.d_bits(),
        invert_radius_sq: params.invert_radius_sq()?.as_f64(),
        accept_radius_sq: params.accept_radius_sq()?.as_f64(),
        condition_i_holds: params.condition_i()?.holds,
        preparation_precondition_holds: params.preparation_precondition()?.holds,
    })
}
