//! Gadget trapdoor generation and inversion.
//!
//! The public matrix takes the tall form
//!
//! ```text
//! A = [ Abar      ]   Abar uniform on Z_q^{mbar x n},  mbar = m - n*k
//!     [ R Abar + G]   R uniform on {-1,+1}^{nk x mbar}
//! ```
//!
//! with gadget `G = I_n (x) (1, 2, ..., 2^{k-1})^T` and `k = ceil(log2 q)`.
//! Every entry of `R Abar + G` is a +-1 combination of independent uniform
//! entries plus a constant, hence an exact uniform marginal, so histogram
//! checks on generated matrices are honest.
//!
//! Given `u = A x + e`, inversion computes `u_2 - R u_1 = G x + (e_2 - R e_1)`
//! and decodes each coordinate of `x` from its gadget block working from the
//! most significant position down. The decode tolerates any combined error
//! of infinity norm below `q/4`; a final exact residual test against the
//! decoding radius turns silent failures into `InversionFailed`.

use crate::encode::bit_width;
use crate::error::{ZqError, ZqResult};
use crate::params::ProtocolParams;
use crate::vector::{ZqMatrix, ZqVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Modulus cap for the per-coordinate brute-force decode fallback.
const GENERIC_DECODE_CAP: u64 = 1 << 20;

/// Secret sign matrix `R` plus the shape data needed to use it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trapdoor {
    n: usize,
    k: u32,
    mbar: usize,
    signs: Vec<i8>,
}

impl Trapdoor {
    /// Secret dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Gadget length `ceil(log2 q)`.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Rows of the uniform top block.
    pub fn mbar(&self) -> usize {
        self.mbar
    }

    /// Sign entry of `R` at `(row, col)`, returned as +-1.
    pub fn sign(&self, row: usize, col: usize) -> i8 {
        self.signs[row * self.mbar + col]
    }

    /// Applies `R` to a length-`mbar` slice, reducing mod `q`.
    fn apply(&self, v: &[u64], q: u64) -> Vec<u64> {
        let qi = q as i128;
        (0..self.n * self.k as usize)
            .map(|row| {
                let mut acc: i128 = 0;
                for (col, &x) in v.iter().enumerate() {
                    let s = self.signs[row * self.mbar + col] as i128;
                    acc += s * x as i128;
                }
                acc.rem_euclid(qi) as u64
            })
            .collect()
    }
}

/// Public matrix together with its trapdoor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrapdoorKeypair {
    matrix: ZqMatrix,
    trapdoor: Trapdoor,
}

impl TrapdoorKeypair {
    /// Public matrix `A` (rows: `mbar` uniform, then `n*k` gadget rows).
    pub fn matrix(&self) -> &ZqMatrix {
        &self.matrix
    }

    /// Trapdoor half of the pair.
    pub fn trapdoor(&self) -> &Trapdoor {
        &self.trapdoor
    }
}

/// Samples a trapdoored matrix. Requires `m >= n*ceil(log2 q) + 1`.
pub fn gentrap<R: Rng + ?Sized>(n: usize, m: usize, q: u64, rng: &mut R) -> ZqResult<TrapdoorKeypair> {
    if n == 0 {
        return Err(ZqError::BadParameter { name: "n", detail: "must be positive".into() });
    }
    let k = bit_width(q);
    let gadget_rows = n
        .checked_mul(k as usize)
        .ok_or(ZqError::TrapdoorShape { n, m, q })?;
    if m <= gadget_rows {
        return Err(ZqError::TrapdoorShape { n, m, q });
    }
    let mbar = m - gadget_rows;

    let top = ZqMatrix::uniform(q, mbar, n, rng)?;
    let signs: Vec<i8> = (0..gadget_rows * mbar)
        .map(|_| if rng.gen::<bool>() { 1 } else { -1 })
        .collect();
    let trapdoor = Trapdoor { n, k, mbar, signs };

    let qw = q as i128;
    let mut bottom_entries = Vec::with_capacity(gadget_rows * n);
    for block in 0..n {
        for bit in 0..k {
            let row = block * k as usize + bit as usize;
            for col in 0..n {
                let mut acc: i128 = 0;
                for t in 0..mbar {
                    acc += trapdoor.signs[row * mbar + t] as i128 * top.entry(t, col) as i128;
                }
                if col == block {
                    acc += (1i128 << bit) % qw;
                }
                bottom_entries.push(acc.rem_euclid(qw) as u64);
            }
        }
    }
    let bottom = ZqMatrix::new(q, gadget_rows, n, bottom_entries)?;
    let matrix = ZqMatrix::vstack(&top, &bottom)?;
    Ok(TrapdoorKeypair { matrix, trapdoor })
}

/// Recovers `x` from `u = A x + e` whenever the residual fits inside the
/// decoding radius `q / (C sqrt(n log2 q))`; otherwise `InversionFailed`.
pub fn invert(kp: &TrapdoorKeypair, params: &ProtocolParams, u: &ZqVector) -> ZqResult<ZqVector> {
    let a = &kp.matrix;
    let td = &kp.trapdoor;
    let q = a.q();
    if u.q() != q {
        return Err(ZqError::ModulusMismatch(q, u.q()));
    }
    if u.len() != a.rows() {
        return Err(ZqError::DimensionMismatch { expected: a.rows(), got: u.len() });
    }
    if params.q != q || params.n != a.cols() || params.m != a.rows() {
        return Err(ZqError::BadParameter {
            name: "params",
            detail: "parameter set does not match the keypair shape".into(),
        });
    }

    let (v1, v2) = u.entries().split_at(td.mbar);
    let folded = td.apply(v1, q);
    // t = v2 - R v1 = G x + (e_2 - R e_1)
    let t: Vec<u64> = v2
        .iter()
        .zip(&folded)
        .map(|(&a, &b)| ((a as u128 + (q - b) as u128) % q as u128) as u64)
        .collect();

    let k = td.k as usize;
    let mut coords = Vec::with_capacity(td.n);
    for block in 0..td.n {
        let slice = &t[block * k..(block + 1) * k];
        let coord = if q.is_power_of_two() {
            decode_block_pow2(slice, q, td.k)
        } else {
            decode_block_generic(slice, q, td.k)?
        };
        coords.push(coord);
    }
    let x = ZqVector::new(q, coords)?;

    let residual = a.mul_vec(&x)?.sub(u)?;
    if params.invert_radius_sq()?.admits(residual.norm_sq())? {
        Ok(x)
    } else {
        Err(ZqError::InversionFailed)
    }
}

/// Bit-by-bit gadget decode for power-of-two moduli: coordinate `k-1-j`
/// carries `2^{k-1-j} x`, so once the low `j` bits of `x` are known the
/// `j`-th bit sits at `q/2` plus an error of magnitude below `q/4`.
fn decode_block_pow2(t: &[u64], q: u64, k: u32) -> u64 {
    let qw = q as u128;
    let mut x = 0u64;
    for j in 0..k {
        let idx = (k - 1 - j) as usize;
        let low = x & ((1u64 << j) - 1);
        let contrib = ((low as u128) << idx) % qw;
        let adj = (t[idx] as u128 + qw - contrib) % qw;
        // Nearest multiple of q/2: adj in [q/4, 3q/4) rounds to bit 1.
        let bit = (((2 * adj + qw / 2) / qw) % 2) as u64;
        x |= bit << j;
    }
    x
}

/// Fallback decode for general moduli: per-coordinate exhaustive scoring
/// of `sum_j centered(t_j - 2^j c)^2` over all candidates `c`.
fn decode_block_generic(t: &[u64], q: u64, k: u32) -> ZqResult<u64> {
    if q > GENERIC_DECODE_CAP {
        return Err(ZqError::EnumerationTooLarge {
            count: q as u128,
            cap: GENERIC_DECODE_CAP as u128,
        });
    }
    let qw = q as u128;
    let mut best = (u128::MAX, 0u64);
    for cand in 0..q {
        let mut score: u128 = 0;
        for (j, &tj) in t.iter().enumerate().take(k as usize) {
            let pow = ((cand as u128) << j) % qw;
            let diff = ((tj as u128 + qw - pow) % qw) as u64;
            let c = crate::encode::centered_rep(diff, q) as i128;
            score += (c * c) as u128;
        }
        if score < best.0 {
            best = (score, cand);
        }
    }
    Ok(best.1)
}
