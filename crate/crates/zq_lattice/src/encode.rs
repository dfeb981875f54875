//! Centered representatives and the little-endian bit encoding `J`.
//!
//! The encoding fixes `w = ceil(log2 q)` bits per coordinate and expands
//! the canonical representative in `[0, q)` least-significant bit first.
//! Coordinates of a vector are concatenated in order, so a vector over
//! Z_q^n maps to `n*w` bits.

use crate::vector::ZqVector;

/// Centered representative of `x mod q` in `{-ceil(q/2)+1, ..., floor(q/2)}`.
///
/// The caller guarantees `x < q`.
pub fn centered_rep(x: u64, q: u64) -> i64 {
    debug_assert!(x < q, "canonical representative {x} out of range for q={q}");
    if x <= q / 2 {
        x as i64
    } else {
        x as i64 - q as i64
    }
}

/// Bits needed for a canonical representative, `ceil(log2 q)`.
pub fn bit_width(q: u64) -> u32 {
    debug_assert!(q >= 2);
    64 - (q - 1).leading_zeros()
}

/// `log2 q` when the modulus is a power of two.
pub fn log2_exact(q: u64) -> Option<u32> {
    if q.is_power_of_two() {
        Some(q.trailing_zeros())
    } else {
        None
    }
}

/// Little-endian bit expansion of the canonical representative of `x`,
/// padded to `ceil(log2 q)` bits.
///
/// # Examples
///
/// ```
/// use zq_lattice::binary_encode;
/// assert_eq!(binary_encode(3, 5), vec![1, 1, 0]);
/// ```
pub fn binary_encode(x: u64, q: u64) -> Vec<u8> {
    debug_assert!(x < q);
    (0..bit_width(q)).map(|j| ((x >> j) & 1) as u8).collect()
}

/// Concatenated little-endian encoding of all coordinates.
///
/// # Examples
///
/// ```
/// use zq_lattice::{binary_encode_vector, ZqVector};
/// let x = ZqVector::new(4, vec![2, 1]).unwrap();
/// assert_eq!(binary_encode_vector(&x), vec![0, 1, 1, 0]);
/// ```
pub fn binary_encode_vector(x: &ZqVector) -> Vec<u8> {
    let q = x.q();
    let w = bit_width(q) as usize;
    let mut bits = Vec::with_capacity(x.len() * w);
    for &coord in x.entries() {
        bits.extend(binary_encode(coord, q));
    }
    bits
}
