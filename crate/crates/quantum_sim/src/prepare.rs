//! Preparation of the committed superposition.
//!
//! The prover builds, over registers `(b, x, z)` with `b` a bit, `x` an
//! n-coordinate and `z` an m-coordinate block of Z_q registers,
//!
//! ```text
//!     |Phi> = sum_{b, x, z}  alpha_z / sqrt(2 q^n)  |b, x, z + A x + b u>,
//! ```
//!
//! where `alpha_z` is the window state of `robust`. The uniform Z_q
//! registers are returned exactly; the constant-depth realization they
//! model is only approximate, so each carries a modeled error budget of
//! `1/q^2` that callers must propagate into closeness accounting.

use crate::error::{SimError, SimResult};
use crate::robust::create_robust_state;
use crate::state::{SparseState, SUPPORT_CAP};
use zq_lattice::{validate_instance, LweInstance, ProtocolParams, Ratio, ZqError, ZqResult, ZqVector};

/// Modeled preparation error, tracked as an exact rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorBudget {
    modeled: Ratio,
}

impl ErrorBudget {
    /// Budget of zero (exactly realizable step).
    pub fn zero() -> Self {
        Self { modeled: Ratio::from_int(0) }
    }

    /// Budget holding the given rational.
    pub fn of(modeled: Ratio) -> Self {
        Self { modeled }
    }

    /// The modeled error as an exact rational.
    pub fn modeled(&self) -> &Ratio {
        &self.modeled
    }

    /// Floating view for reports.
    pub fn as_f64(&self) -> f64 {
        self.modeled.as_f64()
    }

    /// Exact sum of two budgets.
    pub fn accumulate(&self, other: &ErrorBudget) -> ZqResult<ErrorBudget> {
        Ok(Self { modeled: self.modeled.checked_add(&other.modeled)? })
    }
}

/// Exact uniform superposition over one Z_q register, plus the `1/q^2`
/// budget its constant-depth preparation would incur.
pub fn uniform_q_superposition(q: u64) -> SimResult<(SparseState, ErrorBudget)> {
    if q < 2 {
        return Err(SimError::Lattice(ZqError::InvalidModulus(q)));
    }
    if q as u128 > SUPPORT_CAP {
        return Err(SimError::SupportTooLarge { support: q as u128, cap: SUPPORT_CAP });
    }
    let amp = (1.0 / q as f64).sqrt();
    let state = SparseState::from_amplitudes(vec![q], (0..q).map(|v| (vec![v], amp)))?;
    let budget =
        ErrorBudget::of(Ratio::new(1, (q as u128) * (q as u128)).map_err(ZqError::from)?);
    Ok((state, budget))
}

/// Relabels `|b, x, z>` to `|b, x, z + A x + b u>`; amplitudes and support
/// size are untouched (a basis permutation).
pub fn apply_lwe_map(state: &SparseState, k: &LweInstance) -> SimResult<SparseState> {
    let n = k.matrix.cols();
    let m = k.matrix.rows();
    let q = k.matrix.q();
    let expected: Vec<u64> =
        std::iter::once(2).chain(std::iter::repeat(q).take(n + m)).collect();
    if state.moduli() != expected.as_slice() {
        return Err(SimError::LayoutMismatch);
    }
    state.map_basis(|label| {
        let b = label[0];
        let x = ZqVector::new(q, label[1..=n].to_vec()).expect("label in range by invariant");
        let image = k.matrix.mul_vec(&x).expect("shape checked above");
        let mut out = label[..=n].to_vec();
        for (i, &z) in label[n + 1..].iter().enumerate() {
            let shift = (image.entries()[i] + b * k.u.entries()[i]) % q;
            out.push((z + shift) % q);
        }
        out
    })
}

/// Builds the committed state `|Phi>` for a validated instance.
///
/// Preconditions: the instance must pass validation against `params`, the
/// parameter set must derive a window exponent, and the modulus must obey
/// the preparation bound `q >= 8 m B_V C sqrt(m n log2 q) / eps` unless
/// `allow_unchecked` requests an exploratory run.
///
/// Returns the state together with the modeled budget `n/q^2` from the n
/// uniform-register preparations.
pub fn prepare_phi(
    k: &LweInstance,
    params: &ProtocolParams,
    allow_unchecked: bool,
) -> SimResult<(SparseState, ErrorBudget)> {
    let report = validate_instance(k, params, None)?;
    if !report.passed() {
        let failing = report
            .checks
            .iter()
            .find(|c| c.status == zq_lattice::CheckStatus::Fail)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .unwrap_or_else(|| "unknown check".into());
        return Err(SimError::Lattice(ZqError::BadParameter {
            name: "instance",
            detail: format!("instance validation failed ({failing})"),
        }));
    }
    let precondition = params.preparation_precondition()?;
    if !precondition.holds && !allow_unchecked {
        return Err(SimError::PreconditionViolated {
            lhs: precondition.lhs,
            rhs: precondition.rhs,
        });
    }
    let r = params.window_r()?.ok_or(SimError::MissingWindow)?;

    let bit = SparseState::from_amplitudes(
        vec![2],
        [(vec![0], std::f64::consts::FRAC_1_SQRT_2), (vec![1], std::f64::consts::FRAC_1_SQRT_2)],
    )?;
    let mut state = bit;
    let mut budget = ErrorBudget::zero();
    for _ in 0..params.n {
        let (register, register_budget) = uniform_q_superposition(params.q)?;
        state = state.tensor(&register)?;
        budget = budget.accumulate(&register_budget).map_err(SimError::Lattice)?;
    }
    let window = create_robust_state(params.m, params.q, r)?;
    let state = state.tensor(&window)?;
    let state = apply_lwe_map(&state, k)?;
    Ok((state, budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use zq_lattice::{GaussianTable, LweWitness, ZqMatrix};

    fn tiny_params() -> ProtocolParams {
        // n=1, m=2, q=32 with C^2 = 128/5 and eps = 8: every derived
        // threshold is an exact rational and the window exponent is 1.
        ProtocolParams::with_c_squared(
            8,
            1,
            1,
            2,
            32,
            Ratio::from_int(1),
            Ratio::from_int(1),
            Ratio::from_int(8),
            Ratio::new(128, 5).unwrap(),
        )
        .unwrap()
    }

    fn tiny_instance(seed: u64) -> (LweInstance, LweWitness, ProtocolParams) {
        // A = (1, 7) attains the best matrix distance 32 at m=2, q=32,
        // exactly meeting the required separation of the parameter set.
        let params = tiny_params();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let a = ZqMatrix::new(32, 2, 1, vec![1, 7]).unwrap();
        let s = ZqVector::uniform(32, 1, &mut rng).unwrap();
        let e = GaussianTable::new(32, 1.0).unwrap().sample_vector(2, &mut rng);
        let u = a.mul_vec(&s).unwrap().add(&e).unwrap();
        (LweInstance { matrix: a, u }, LweWitness { s, e }, params)
    }

    // ---- uniform registers ----------------------------------------------

    #[test]
    fn uniform_register_is_exact_with_budget() {
        let (state, budget) = uniform_q_superposition(5).unwrap();
        assert_eq!(state.support_len(), 5);
        for (_, amp) in state.iter() {
            assert!((amp - 1.0 / 5f64.sqrt()).abs() < 1e-15);
        }
        assert_eq!(budget.modeled(), &Ratio::new(1, 25).unwrap());
    }

    #[test]
    fn uniform_budgets_accumulate_exactly() {
        let (_, one) = uniform_q_superposition(4).unwrap();
        let total = one.accumulate(&one).unwrap().accumulate(&one).unwrap();
        assert_eq!(total.modeled(), &Ratio::new(3, 16).unwrap());
    }

    // ---- the LWE basis map ----------------------------------------------

    #[test]
    fn lwe_map_examples() {
        let q = 8;
        let a = ZqMatrix::new(q, 2, 1, vec![3, 5]).unwrap();
        let u = ZqVector::new(q, vec![1, 2]).unwrap();
        let k = LweInstance { matrix: a, u };

        // |0,0,z> is fixed.
        let z0 = SparseState::basis_point(vec![2, 8, 8, 8], vec![0, 0, 6, 7]).unwrap();
        assert_eq!(apply_lwe_map(&z0, &k).unwrap(), z0);

        // |1,0,0> maps to |1,0,u>.
        let s = SparseState::basis_point(vec![2, 8, 8, 8], vec![1, 0, 0, 0]).unwrap();
        let mapped = apply_lwe_map(&s, &k).unwrap();
        assert!((mapped.amp(&[1, 0, 1, 2]) - 1.0).abs() < 1e-15);

        // |0,x,0> maps to |0,x,Ax>.
        let s = SparseState::basis_point(vec![2, 8, 8, 8], vec![0, 3, 0, 0]).unwrap();
        let mapped = apply_lwe_map(&s, &k).unwrap();
        assert!((mapped.amp(&[0, 3, 1, 7]) - 1.0).abs() < 1e-15, "A*3 = (9,15) = (1,7) mod 8");
    }

    #[test]
    fn lwe_map_rejects_wrong_layout() {
        let q = 8;
        let a = ZqMatrix::new(q, 2, 1, vec![3, 5]).unwrap();
        let u = ZqVector::new(q, vec![1, 2]).unwrap();
        let k = LweInstance { matrix: a, u };
        let s = SparseState::basis_point(vec![2, 8, 8], vec![0, 0, 0]).unwrap();
        assert_eq!(apply_lwe_map(&s, &k).unwrap_err(), SimError::LayoutMismatch);
    }

    #[test]
    fn lwe_map_preserves_norm_and_support() {
        let (instance, _, params) = tiny_instance(7);
        let (state, _) = prepare_phi(&instance, &params, false).unwrap();
        state.check_norm(1e-9).unwrap();
        // 2 * q^n * 2^(m r) = 2 * 32 * 4.
        assert_eq!(state.support_len(), 256);
    }

    // ---- the committed state --------------------------------------------

    #[test]
    fn committed_state_amplitudes_are_uniform() {
        let (instance, _, params) = tiny_instance(11);
        let (state, budget) = prepare_phi(&instance, &params, false).unwrap();
        let expected = 1.0 / (256f64).sqrt();
        for (label, amp) in state.iter() {
            assert!((amp - expected).abs() < 1e-12, "label {label:?} had amp {amp}");
        }
        assert_eq!(budget.modeled(), &Ratio::new(1, 1024).unwrap());
    }

    #[test]
    fn committed_state_support_lies_on_shifted_windows() {
        // Every support point (b, x, w) must satisfy w - Ax - bu in I^m.
        let (instance, _, params) = tiny_instance(13);
        let (state, _) = prepare_phi(&instance, &params, false).unwrap();
        let q = params.q;
        let halfwidth = params.window_halfwidth().unwrap().unwrap() as i64;
        for (label, _) in state.iter() {
            let b = label[0];
            let x = ZqVector::new(q, label[1..=params.n].to_vec()).unwrap();
            let image = instance.matrix.mul_vec(&x).unwrap();
            for (i, &w) in label[params.n + 1..].iter().enumerate() {
                let shift = (image.entries()[i] + b * instance.u.entries()[i]) % q;
                let z = zq_lattice::centered_rep((w + q - shift) % q, q);
                assert!(
                    -halfwidth <= z && z < halfwidth,
                    "residual {z} outside window at {label:?}"
                );
            }
        }
    }

    #[test]
    fn precondition_gate_can_be_overridden() {
        // Same shape but eps tightened so the preparation bound fails.
        let (instance, _, _) = tiny_instance(17);
        let strict = ProtocolParams::with_c_squared(
            8,
            1,
            1,
            2,
            32,
            Ratio::from_int(1),
            Ratio::from_int(1),
            Ratio::new(1, 4).unwrap(),
            Ratio::new(128, 5).unwrap(),
        )
        .unwrap();
        let err = prepare_phi(&instance, &strict, false).unwrap_err();
        assert!(matches!(err, SimError::PreconditionViolated { .. }));
        let (state, _) = prepare_phi(&instance, &strict, true).unwrap();
        state.check_norm(1e-9).unwrap();
    }
}
