//! Shift-tolerant window superpositions.
//!
//! The prover's noise register holds the uniform superposition over the
//! dyadic window
//!
//! ```text
//!     I = {-2^(r-1), ..., 0, ..., 2^(r-1) - 1},
//! ```
//!
//! one window per coordinate, so the full state is uniform over I^m with
//! amplitude 2^(-mr/2). Shifting such a state by a small vector `e` barely
//! moves it: the overlap is the fraction of the window box surviving the
//! shift,
//!
//! ```text
//!     <phi | phi + e> = prod_i max(0, 2^r - |e_i|) / 2^r,
//! ```
//!
//! valid whenever the shifted window cannot wrap around the modulus. Both
//! the closed form and the simulated inner product are exposed so tests can
//! compare the two routes; all quantities here are dyadic, so `f64`
//! comparisons are exact while `m * r <= 52`.

use crate::error::{SimError, SimResult};
use crate::state::{SparseState, SUPPORT_CAP};
use zq_lattice::{centered_rep, Ratio, ZqError, ZqVector};

/// Uniform superposition over the window `I^m` inside `Z_q^m`.
///
/// `r` is the window exponent: each coordinate ranges over the `2^r`
/// residues `{-2^(r-1), ..., 2^(r-1)-1}` in centered form.
pub fn create_robust_state(m: usize, q: u64, r: u32) -> SimResult<SparseState> {
    if m == 0 {
        return Err(SimError::EmptyState);
    }
    if r == 0 {
        return Err(SimError::Lattice(ZqError::BadParameter {
            name: "r",
            detail: "window exponent must be at least 1".into(),
        }));
    }
    if r >= 63 || (1u64 << r) > q {
        return Err(SimError::WindowTooLarge { r, q });
    }
    let width_bits = (m as u32).checked_mul(r).filter(|&b| b < 127);
    let support = match width_bits {
        Some(bits) => 1u128 << bits,
        None => return Err(SimError::SupportTooLarge { support: u128::MAX, cap: SUPPORT_CAP }),
    };
    if support > SUPPORT_CAP {
        return Err(SimError::SupportTooLarge { support, cap: SUPPORT_CAP });
    }

    let halfwidth = 1i64 << (r - 1);
    let width = 1u64 << r;
    let amp = (1.0 / support as f64).sqrt();
    let mut pairs = Vec::with_capacity(support as usize);
    let mut odometer = vec![0u64; m];
    loop {
        let label: Vec<u64> = odometer
            .iter()
            .map(|&t| {
                let centered = t as i64 - halfwidth;
                centered.rem_euclid(q as i64) as u64
            })
            .collect();
        pairs.push((label, amp));
        // Advance the mixed-radix counter over I^m.
        let mut pos = 0;
        loop {
            if pos == m {
                return SparseState::from_amplitudes(vec![q; m], pairs);
            }
            odometer[pos] += 1;
            if odometer[pos] < width {
                break;
            }
            odometer[pos] = 0;
            pos += 1;
        }
    }
}

/// Translates every basis point by `e`, coordinate-wise mod q.
pub fn shift_state(state: &SparseState, e: &ZqVector) -> SimResult<SparseState> {
    if e.len() != state.registers() {
        return Err(SimError::BasisShape { expected: state.registers(), got: e.len() });
    }
    if state.moduli().iter().any(|&q| q != e.q()) {
        return Err(SimError::LayoutMismatch);
    }
    let q = e.q();
    state.map_basis(|label| {
        label.iter().zip(e.entries()).map(|(&v, &s)| (v + s) % q).collect()
    })
}

/// Inner product of a state with its own shift by `e`, computed on the
/// materialized supports (wrap-around handled by working in Z_q).
pub fn overlap_shifted(state: &SparseState, e: &ZqVector) -> SimResult<f64> {
    let shifted = shift_state(state, e)?;
    state.inner(&shifted)
}

/// Closed-form overlap of the window state with its shift:
/// `prod_i max(0, 2^r - |e_i|) / 2^r`.
///
/// Only valid while the shifted window cannot wrap: requires
/// `2^r + |e_i| <= q` for every coordinate.
pub fn closed_form_overlap(r: u32, e: &ZqVector) -> SimResult<f64> {
    let q = e.q();
    if r == 0 || r >= 63 || (1u64 << r) > q {
        return Err(SimError::WindowTooLarge { r, q });
    }
    let width = 1u64 << r;
    let mut numerator: u128 = 1;
    let mut denominator: u128 = 1;
    for &coord in e.entries() {
        let mag = centered_rep(coord, q).unsigned_abs();
        if width + mag > q {
            return Err(SimError::WindowTooLarge { r, q });
        }
        numerator *= width.saturating_sub(mag) as u128;
        denominator *= width as u128;
    }
    Ok(numerator as f64 / denominator as f64)
}

/// Linearized overlap guarantee `1 - m * B_V / 2^(r-1)` for shifts with
/// `|e_i| <= B_V`.
pub fn overlap_lower_bound(m: usize, b_v: &Ratio, r: u32) -> f64 {
    1.0 - m as f64 * b_v.as_f64() / (1u64 << (r - 1)) as f64
}

/// True iff every support coordinate has centered magnitude strictly
/// below `bound`.
pub fn check_bounded(state: &SparseState, bound: f64) -> bool {
    check_bounded_from(state, 0, bound)
}

/// Boundedness restricted to registers `from..` (used to inspect the noise
/// block of a layered state).
pub fn check_bounded_from(state: &SparseState, from: usize, bound: f64) -> bool {
    let moduli = state.moduli();
    state.iter().all(|(label, _)| {
        label[from..]
            .iter()
            .zip(&moduli[from..])
            .all(|(&v, &q)| (centered_rep(v, q).unsigned_abs() as f64) < bound)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use zq_lattice::ZqVector;

    fn vector(q: u64, entries: &[i64]) -> ZqVector {
        ZqVector::from_centered(q, entries).unwrap()
    }

    // ---- window construction -------------------------------------------

    #[test]
    fn smallest_window_is_the_two_point_state() {
        let s = create_robust_state(1, 8, 1).unwrap();
        assert_eq!(s.support_len(), 2);
        let a = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amp(&[7]) - a).abs() < 1e-15, "expected weight on -1 = 7 mod 8");
        assert!((s.amp(&[0]) - a).abs() < 1e-15, "expected weight on 0");
    }

    #[test]
    fn window_m2_r2_has_sixteen_quarter_amplitudes() {
        let s = create_robust_state(2, 16, 2).unwrap();
        assert_eq!(s.support_len(), 16);
        for (label, amp) in s.iter() {
            assert!((amp - 0.25).abs() < 1e-15, "label {label:?} had amp {amp}");
        }
    }

    #[test]
    fn window_support_respects_halfwidth() {
        let s = create_robust_state(2, 32, 3).unwrap();
        let halfwidth = 4.0; // 2^(r-1)
        assert!(check_bounded(&s, halfwidth + 1.0));
        assert!(!check_bounded(&s, halfwidth - 1.0), "-2^(r-1) sits in the support");
        assert!(!check_bounded(&s, halfwidth), "boundedness is strict");
    }

    #[test]
    fn singleton_zero_state_is_bounded_by_any_positive_radius() {
        let s = SparseState::basis_point(vec![8, 8], vec![0, 0]).unwrap();
        assert!(check_bounded(&s, 0.5));
    }

    #[test]
    fn window_rejects_bad_parameters() {
        assert!(matches!(create_robust_state(1, 8, 0), Err(SimError::Lattice(_))));
        assert!(matches!(
            create_robust_state(1, 8, 4),
            Err(SimError::WindowTooLarge { r: 4, q: 8 })
        ));
        assert!(matches!(
            create_robust_state(12, 1 << 30, 2),
            Err(SimError::SupportTooLarge { .. })
        ));
    }

    // ---- overlaps: simulated route vs closed form -----------------------

    #[test]
    fn zero_shift_overlap_is_one() {
        let s = create_robust_state(2, 16, 2).unwrap();
        let e = vector(16, &[0, 0]);
        assert_eq!(overlap_shifted(&s, &e).unwrap(), 1.0);
        assert_eq!(closed_form_overlap(2, &e).unwrap(), 1.0);
    }

    #[test]
    fn unit_shifts_lose_one_window_slice_per_coordinate() {
        // m=2, r=2: each coordinate keeps 3 of 4 slices -> (3/4)^2.
        let s = create_robust_state(2, 16, 2).unwrap();
        let e = vector(16, &[1, -1]);
        let simulated = overlap_shifted(&s, &e).unwrap();
        assert_eq!(simulated, 9.0 / 16.0);
        assert_eq!(closed_form_overlap(2, &e).unwrap(), simulated);
    }

    #[test]
    fn closed_form_matches_simulation_across_small_shifts() {
        let s = create_robust_state(2, 32, 3).unwrap();
        for a in -8i64..=8 {
            for b in -8i64..=8 {
                let e = vector(32, &[a, b]);
                // Validity regime: 2^r + |e_i| <= q holds for all |e_i| <= 8.
                let closed = closed_form_overlap(3, &e).unwrap();
                let simulated = overlap_shifted(&s, &e).unwrap();
                assert_eq!(
                    closed, simulated,
                    "dyadic overlap must match exactly at shift ({a},{b})"
                );
            }
        }
    }

    #[test]
    fn closed_form_refuses_wraparound_regime() {
        // q = 8, r = 3: the window is the whole ring, so any nonzero shift
        // wraps (8 + 1 > 8) and the product formula would undercount.
        let e = vector(8, &[1]);
        assert!(matches!(closed_form_overlap(3, &e), Err(SimError::WindowTooLarge { .. })));
        // The simulated route works in Z_q and sees the full-ring state as
        // shift-invariant (amplitude 1/sqrt(8) is irrational, so only
        // near-exact here).
        let s = create_robust_state(1, 8, 3).unwrap();
        assert!((overlap_shifted(&s, &e).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_is_valid_up_to_the_wrap_boundary() {
        // q = 8, r = 2, shift 4: window {-2..1} lands on {2..5}, empty
        // intersection; 2^r + |e| = q exactly, still wrap-free.
        let s = create_robust_state(1, 8, 2).unwrap();
        let e = vector(8, &[4]);
        assert_eq!(closed_form_overlap(2, &e).unwrap(), 0.0);
        assert_eq!(overlap_shifted(&s, &e).unwrap(), 0.0);
        // Shift 5 (centered -3) keeps exactly one slice: {3..6} meets
        // {6,7,0,1} in {6}.
        let e = vector(8, &[5]);
        assert_eq!(closed_form_overlap(2, &e).unwrap(), 0.25);
        assert_eq!(overlap_shifted(&s, &e).unwrap(), 0.25);
    }

    #[test]
    fn bounded_shifts_beat_the_linear_bound() {
        let m = 3;
        let r = 4;
        let b_v = Ratio::from_int(2);
        let s = create_robust_state(m, 64, r).unwrap();
        let bound = overlap_lower_bound(m, &b_v, r);
        assert!((bound - (1.0 - 3.0 * 2.0 / 8.0)).abs() < 1e-15);
        for e in [vector(64, &[2, -2, 2]), vector(64, &[1, 0, -2]), vector(64, &[-1, -1, -1])] {
            let overlap = overlap_shifted(&s, &e).unwrap();
            assert!(
                overlap >= bound,
                "overlap {overlap} fell below guarantee {bound} for {e:?}"
            );
        }
    }

    #[test]
    fn suffix_boundedness_ignores_leading_registers() {
        // First register holds a large value; suffix registers stay small.
        let s = SparseState::basis_point(vec![32, 32, 32], vec![15, 1, 31]).unwrap();
        assert!(!check_bounded(&s, 3.0));
        assert!(check_bounded_from(&s, 1, 3.0), "suffix is (1, -1)");
    }
}
