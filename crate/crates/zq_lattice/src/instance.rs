//! LWE instances, witnesses, and validation.
//!
//! An instance is the verifier's public message `(A, u = A s + e)`. The
//! witness `(s, e)` stays on the verifier side; simulation components may
//! hold it too, flagged as a shortcut that a real prover never sees.

use crate::bruteforce::matrix_distance_bruteforce;
use crate::error::ZqResult;
use crate::gauss::GaussianTable;
use crate::params::ProtocolParams;
use crate::trapdoor::TrapdoorKeypair;
use crate::vector::{ZqMatrix, ZqVector};
use crate::ENUMERATION_CAP;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Public LWE instance `(A, u)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LweInstance {
    /// Public matrix, `m x n`.
    pub matrix: ZqMatrix,
    /// Shifted image `u = A s + e`.
    pub u: ZqVector,
}

/// Secret witness for an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LweWitness {
    /// Secret vector.
    pub s: ZqVector,
    /// Error vector (canonical representatives).
    pub e: ZqVector,
}

/// Samples `s` uniformly and `e` from the truncated Gaussian, producing
/// the public instance and its witness.
pub fn make_instance<R: Rng + ?Sized>(
    kp: &TrapdoorKeypair,
    params: &ProtocolParams,
    rng: &mut R,
) -> ZqResult<(LweInstance, LweWitness)> {
    let a = kp.matrix();
    let s = ZqVector::uniform(a.q(), a.cols(), rng)?;
    let table = GaussianTable::new(a.q(), params.b_v.as_f64())?;
    let e = table.sample_vector(a.rows(), rng);
    let u = a.mul_vec(&s)?.add(&e)?;
    Ok((LweInstance { matrix: a.clone(), u }, LweWitness { s, e }))
}

/// Status of a single validation check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckStatus {
    /// The condition holds.
    Pass,
    /// The condition fails.
    Fail,
    /// The condition could not be decided within enumeration limits.
    Unchecked,
}

/// One named validation outcome.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationCheck {
    /// Stable check identifier.
    pub name: &'static str,
    /// Outcome.
    pub status: CheckStatus,
    /// Human-readable numbers behind the outcome.
    pub detail: String,
}

/// Full validation outcome for an instance.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    /// Individual checks in a fixed order.
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    /// True when no check failed (unchecked entries are allowed).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    /// True when every check was decided and passed.
    pub fn fully_verified(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    /// Looks up a check by name.
    pub fn check(&self, name: &str) -> Option<&ValidationCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Validates an instance against the parameter set: shape agreement, the
/// modulus condition, the derived window, the matrix-distance requirement
/// (exhaustively when `q^n` is enumerable, otherwise `Unchecked`), and the
/// witness conditions when a witness is supplied.
pub fn validate_instance(
    instance: &LweInstance,
    params: &ProtocolParams,
    witness: Option<&LweWitness>,
) -> ZqResult<ValidationReport> {
    let mut checks = Vec::new();
    let a = &instance.matrix;

    let shape_ok = a.q() == params.q
        && a.rows() == params.m
        && a.cols() == params.n
        && instance.u.q() == params.q
        && instance.u.len() == params.m;
    checks.push(ValidationCheck {
        name: "shape",
        status: if shape_ok { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: format!(
            "matrix {}x{} mod {}, target length {}, params ({}, {}, {})",
            a.rows(),
            a.cols(),
            a.q(),
            instance.u.len(),
            params.m,
            params.n,
            params.q
        ),
    });
    if !shape_ok {
        return Ok(ValidationReport { checks });
    }

    let cond = params.condition_i()?;
    checks.push(ValidationCheck {
        name: "modulus-noise-condition",
        status: if cond.holds { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: format!(
            "q^2 = {:.4e} vs B_V^2 C^2 m n log2(q) = {:.4e} ({})",
            cond.lhs,
            cond.rhs,
            if cond.exact { "exact" } else { "approx" }
        ),
    });

    let window = params.window_r()?;
    checks.push(ValidationCheck {
        name: "window-exponent",
        status: if window.is_some() { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: match window {
            Some(r) => format!("r = {r}"),
            None => "B_P < 2: no window exponent".into(),
        },
    });

    let required = params.accept_radius_sq()?;
    let count = (1..=a.cols()).try_fold(1u128, |acc, _| {
        acc.checked_mul(a.q() as u128).filter(|&v| v <= ENUMERATION_CAP)
    });
    match count {
        Some(_) => {
            let report = matrix_distance_bruteforce(a)?;
            let holds = match &required {
                crate::params::Threshold::Exact(r) => {
                    r.try_cmp_int(report.min_norm_sq)? != Ordering::Greater
                }
                crate::params::Threshold::Approx(t) => report.min_norm_sq as f64 >= *t,
            };
            checks.push(ValidationCheck {
                name: "matrix-distance",
                status: if holds { CheckStatus::Pass } else { CheckStatus::Fail },
                detail: format!(
                    "distance^2 = {} vs required {:.4}",
                    report.min_norm_sq,
                    required.as_f64()
                ),
            });
        }
        None => {
            checks.push(ValidationCheck {
                name: "matrix-distance",
                status: CheckStatus::Unchecked,
                detail: format!(
                    "q^n = {}^{} exceeds enumeration cap {}",
                    a.q(),
                    a.cols(),
                    ENUMERATION_CAP
                ),
            });
        }
    }

    if let Some(w) = witness {
        let inf = w.e.inf_norm();
        let noise_ok = params.b_v.try_cmp_int(inf as u128)? != Ordering::Less;
        checks.push(ValidationCheck {
            name: "witness-noise",
            status: if noise_ok { CheckStatus::Pass } else { CheckStatus::Fail },
            detail: format!("||e||_inf = {} vs B_V = {}", inf, params.b_v),
        });
        let consistent = a.mul_vec(&w.s)?.add(&w.e)? == instance.u;
        checks.push(ValidationCheck {
            name: "witness-consistency",
            status: if consistent { CheckStatus::Pass } else { CheckStatus::Fail },
            detail: "u == A s + e".into(),
        });
    }

    Ok(ValidationReport { checks })
}
