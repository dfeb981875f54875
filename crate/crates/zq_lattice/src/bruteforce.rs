//! Enumeration baselines.
//!
//! These routines recompute, by exhaustive search, quantities that the
//! fast paths obtain through structure (trapdoor inversion, gadget
//! distance bounds). They are deliberately written against the raw
//! definitions so the two routes stay independent: agreement between
//! [`invert_bruteforce`] and the trapdoor decoder is itself one of the
//! workspace's acceptance checks.

use crate::error::{ZqError, ZqResult};
use crate::params::ProtocolParams;
use crate::vector::{ZqMatrix, ZqVector};
use rand::Rng;
use serde::Serialize;

/// Hard cap on enumerated candidate counts (`q^n` style searches).
pub const ENUMERATION_CAP: u128 = 1 << 24;

fn checked_pow(q: u64, n: usize) -> ZqResult<u128> {
    let mut acc: u128 = 1;
    for _ in 0..n {
        acc = acc.saturating_mul(q as u128);
        if acc > ENUMERATION_CAP {
            return Err(ZqError::EnumerationTooLarge { count: acc, cap: ENUMERATION_CAP });
        }
    }
    Ok(acc)
}

/// Advances a little-endian odometer over `[0, q)^len`; false on wraparound.
fn next_point(point: &mut [u64], q: u64) -> bool {
    for slot in point.iter_mut() {
        *slot += 1;
        if *slot < q {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Minimum nonzero image norm of a matrix, with a witness input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceReport {
    /// Exact squared distance `min_{x != 0} ||A x||^2`.
    pub min_norm_sq: u128,
    /// An input achieving the minimum.
    pub witness: ZqVector,
}

/// Exhaustive matrix distance `min_{x != 0} ||A x||` (squared, exact).
///
/// Enumerates all of `Z_q^n`, so it requires `q^n <= 2^24`.
pub fn matrix_distance_bruteforce(a: &ZqMatrix) -> ZqResult<DistanceReport> {
    let q = a.q();
    let n = a.cols();
    checked_pow(q, n)?;
    let mut point = vec![0u64; n];
    let mut best: Option<(u128, Vec<u64>)> = None;
    while next_point(&mut point, q) {
        let x = ZqVector::new(q, point.clone())?;
        let norm = a.mul_vec(&x)?.norm_sq();
        if best.as_ref().is_none_or(|(b, _)| norm < *b) {
            best = Some((norm, point.clone()));
            if norm == 0 {
                break;
            }
        }
    }
    let (min_norm_sq, witness) = best.expect("q >= 2 guarantees a nonzero input");
    Ok(DistanceReport { min_norm_sq, witness: ZqVector::new(q, witness)? })
}

/// Brute-force preimage recovery: returns the unique `x` whose residual
/// `||A x - u||` fits inside the decoding radius, `InversionFailed` when
/// none does, and `AmbiguousPreimage` when two do.
pub fn invert_bruteforce(
    a: &ZqMatrix,
    params: &ProtocolParams,
    u: &ZqVector,
) -> ZqResult<ZqVector> {
    let q = a.q();
    if u.q() != q {
        return Err(ZqError::ModulusMismatch(q, u.q()));
    }
    if u.len() != a.rows() {
        return Err(ZqError::DimensionMismatch { expected: a.rows(), got: u.len() });
    }
    checked_pow(q, a.cols())?;
    let radius = params.invert_radius_sq()?;
    let mut point = vec![0u64; a.cols()];
    let mut found: Option<ZqVector> = None;
    loop {
        let x = ZqVector::new(q, point.clone())?;
        let residual = a.mul_vec(&x)?.sub(u)?.norm_sq();
        if radius.admits(residual)? {
            if found.is_some() {
                return Err(ZqError::AmbiguousPreimage);
            }
            found = Some(x);
        }
        if !next_point(&mut point, q) {
            break;
        }
    }
    found.ok_or(ZqError::InversionFailed)
}

/// Exhaustive search over all single-column matrices in `Z_q^m` for the one
/// maximizing the matrix distance. Returns `(best squared distance, A)`.
///
/// The scan order is fixed (little-endian odometer), so results are
/// reproducible and safe to freeze in tests.
pub fn best_single_column_matrix(m: usize, q: u64) -> ZqResult<(u128, ZqMatrix)> {
    checked_pow(q, m)?;
    let mut column = vec![0u64; m];
    let mut best: Option<(u128, Vec<u64>)> = None;
    while next_point(&mut column, q) {
        // min over x != 0 of ||x * a||^2; x and q - x give the same norm.
        let mut min_norm = u128::MAX;
        for x in 1..=q / 2 {
            let norm = ZqVector::new(q, column.clone())?.scale(x).norm_sq();
            min_norm = min_norm.min(norm);
            if min_norm == 0 {
                break;
            }
        }
        if best.as_ref().is_none_or(|(b, _)| min_norm > *b) {
            best = Some((min_norm, column.clone()));
        }
    }
    let (dist, column) = best.expect("q >= 2 guarantees a candidate");
    Ok((dist, ZqMatrix::new(q, m, 1, column)?))
}

/// Random search over `Z_q^{m x n}` matrices for a large matrix distance.
/// Returns the best `(squared distance, A)` among `tries` samples.
pub fn random_matrix_search<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    q: u64,
    tries: usize,
    rng: &mut R,
) -> ZqResult<(u128, ZqMatrix)> {
    checked_pow(q, n)?;
    let mut best: Option<(u128, ZqMatrix)> = None;
    for _ in 0..tries {
        let a = ZqMatrix::uniform(q, m, n, rng)?;
        let report = matrix_distance_bruteforce(&a)?;
        if best.as_ref().is_none_or(|(b, _)| report.min_norm_sq > *b) {
            best = Some((report.min_norm_sq, a));
        }
    }
    best.ok_or(ZqError::BadParameter { name: "tries", detail: "must be positive".into() })
}
