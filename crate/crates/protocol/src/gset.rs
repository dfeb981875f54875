//! The "good d" sets behind the equation check.
//!
//! A response to challenge `r = 1` is a pair `(c, d)` that must satisfy
//! `c = <d, J(x0) xor J(x0 - s)>` for the committed claw `(x0, x0 - s)`,
//! where `J` is the little-endian binary encoding of each coordinate.
//! That equation is only a meaningful test when `d` actually probes the
//! claw, which the good sets capture:
//!
//! ```text
//! I_{b,x}(d)_i = <d_block_i, (J(x) xor J(x - (-1)^b 1))_block_i>  mod 2
//! G_{b,x}      = { d : some coordinate of I_{b,x}(d) indexed in
//!                      [b n/2 + 1, b n/2 + n/2] (1-based) is nonzero }
//! G_{s,0,x}    = G_{0,x} intersect G_{1,x-s}
//! G_{s,1,x}    = G_{0,x+s} intersect G_{1,x}
//! ```
//!
//! Here `1` is the all-ones vector, blocks are the `ceil(log2 q)`-bit
//! groups of one coordinate, and `n` must be even so the two index
//! ranges split the coordinates in half. Each block condition is a
//! parity of a nonzero mask, so exactly half of the block values satisfy
//! it; the two halves of `d` are constrained through disjoint index
//! ranges, which makes the good sets dense: `|G_{b,x}| / 2^{nk} =
//! 1 - 2^{-n/2}` and `|G_{s,b,x}| / 2^{nk} = (1 - 2^{-n/2})^2`, exactly.

use crate::error::{ProtocolError, ProtocolResult};
use zq_lattice::{binary_encode_vector, bit_width, ZqVector};

/// Checks that `d` is a 0/1 vector of length `n * ceil(log2 q)`.
fn check_bits(d: &[u8], x: &ZqVector) -> ProtocolResult<()> {
    let expected = x.len() * bit_width(x.q()) as usize;
    if d.len() != expected {
        return Err(ProtocolError::BitLength { expected, got: d.len() });
    }
    if let Some(&value) = d.iter().find(|&&b| b > 1) {
        return Err(ProtocolError::NotABit { value });
    }
    Ok(())
}

/// XOR of two equal-length bit vectors.
fn xor_bits(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(&p, &q)| p ^ q).collect()
}

/// Inner product of two equal-length bit vectors, mod 2.
fn parity_dot(a: &[u8], b: &[u8]) -> u8 {
    a.iter().zip(b).fold(0, |acc, (&p, &q)| acc ^ (p & q))
}

/// The encoding difference `J(x) xor J(x - s)` that the equation bit and
/// the Hadamard-basis response are measured against.
pub fn claw_mask(x0: &ZqVector, s: &ZqVector) -> ProtocolResult<Vec<u8>> {
    let other = x0.sub(s)?;
    Ok(xor_bits(&binary_encode_vector(x0), &binary_encode_vector(&other)))
}

/// The equation bit `<d, J(x0) xor J(x0 - s)> mod 2`.
pub fn equation_bit(d: &[u8], x0: &ZqVector, s: &ZqVector) -> ProtocolResult<u8> {
    check_bits(d, x0)?;
    Ok(parity_dot(d, &claw_mask(x0, s)?))
}

/// The coordinate map `I_{b,x}(d)`: bit `i` is the parity of `d`'s `i`-th
/// block against the encoding difference of `x` and `x - (-1)^b * 1`.
pub fn i_map(d: &[u8], b: u8, x: &ZqVector) -> ProtocolResult<Vec<u8>> {
    check_bits(d, x)?;
    if b > 1 {
        return Err(ProtocolError::NotABit { value: b });
    }
    let q = x.q();
    let ones = ZqVector::new(q, vec![1; x.len()])?;
    let shifted = if b == 0 { x.sub(&ones)? } else { x.add(&ones)? };
    let mask = xor_bits(&binary_encode_vector(x), &binary_encode_vector(&shifted));
    let k = bit_width(q) as usize;
    Ok((0..x.len()).map(|i| parity_dot(&d[i * k..(i + 1) * k], &mask[i * k..(i + 1) * k])).collect())
}

/// Membership in `G_{b,x}`: some coordinate of `I_{b,x}(d)` with 1-based
/// index in `[b n/2 + 1, b n/2 + n/2]` is nonzero. Requires even `n`.
pub fn in_g_bx(d: &[u8], b: u8, x: &ZqVector) -> ProtocolResult<bool> {
    let n = x.len();
    if n % 2 != 0 {
        return Err(ProtocolError::OddDimension { n });
    }
    let coords = i_map(d, b, x)?;
    let start = b as usize * n / 2;
    Ok(coords[start..start + n / 2].iter().any(|&c| c != 0))
}

/// Membership in `G_{s,b,x}`, the intersection tying both claw branches.
pub fn in_g_sbx(d: &[u8], s: &ZqVector, b: u8, x: &ZqVector) -> ProtocolResult<bool> {
    match b {
        0 => Ok(in_g_bx(d, 0, x)? && in_g_bx(d, 1, &x.sub(s)?)?),
        1 => Ok(in_g_bx(d, 0, &x.add(s)?)? && in_g_bx(d, 1, x)?),
        other => Err(ProtocolError::NotABit { value: other }),
    }
}

/// Enumerates all of `{0,1}^bits` as bit vectors, for exhaustive counts.
pub fn all_bit_vectors(bits: usize) -> impl Iterator<Item = Vec<u8>> {
    assert!(bits < 32, "exhaustive bit enumeration capped at 31 bits");
    (0u32..1 << bits).map(move |w| (0..bits).map(|j| ((w >> j) & 1) as u8).collect())
}

/// Enumerates all of `Z_q^n`, lexicographically by coordinate.
pub fn all_vectors(q: u64, n: usize) -> impl Iterator<Item = ZqVector> {
    let count = (q as u128).pow(n as u32);
    assert!(count <= 1 << 24, "exhaustive vector enumeration too large");
    (0..count as u64).map(move |mut w| {
        let coords = (0..n)
            .map(|_| {
                let c = w % q;
                w /= q;
                c
            })
            .collect();
        ZqVector::new(q, coords).expect("coordinates below q")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(q: u64, coords: &[u64]) -> ZqVector {
        ZqVector::new(q, coords.to_vec()).unwrap()
    }

    // ---------------------------------------------------------------
    // coordinate map
    // ---------------------------------------------------------------

    #[test]
    fn zero_d_maps_to_zero_and_stays_outside_every_good_set() {
        let x = v(4, &[2, 1]);
        let s = v(4, &[3, 0]);
        let d = vec![0u8; 4];
        assert_eq!(i_map(&d, 0, &x).unwrap(), vec![0, 0]);
        assert!(!in_g_bx(&d, 0, &x).unwrap());
        assert!(!in_g_bx(&d, 1, &x).unwrap());
        assert!(!in_g_sbx(&d, &s, 0, &x).unwrap());
        assert!(!in_g_sbx(&d, &s, 1, &x).unwrap());
    }

    #[test]
    fn single_coordinate_example_evaluates_by_hand() {
        // q = 4, x = (2), b = 0: J(2) = (0,1), J(1) = (1,0), difference
        // mask (1,1); d = (1,0) hits exactly the low bit, parity 1.
        let x = v(4, &[2]);
        assert_eq!(i_map(&[1, 0], 0, &x).unwrap(), vec![1]);
        assert_eq!(i_map(&[0, 1], 0, &x).unwrap(), vec![1]);
        assert_eq!(i_map(&[1, 1], 0, &x).unwrap(), vec![0]);
    }

    #[test]
    fn coordinate_map_is_linear_over_gf2() {
        let x = v(8, &[5, 2]);
        for b in [0u8, 1] {
            for w1 in 0u32..64 {
                let d1: Vec<u8> = (0..6).map(|j| ((w1 >> j) & 1) as u8).collect();
                let d2: Vec<u8> = (0..6).map(|j| (((w1 * 37 + 11) >> j) & 1) as u8).collect();
                let xor: Vec<u8> = d1.iter().zip(&d2).map(|(&a, &c)| a ^ c).collect();
                let lhs = i_map(&xor, b, &x).unwrap();
                let rhs: Vec<u8> = i_map(&d1, b, &x)
                    .unwrap()
                    .iter()
                    .zip(&i_map(&d2, b, &x).unwrap())
                    .map(|(&a, &c)| a ^ c)
                    .collect();
                assert_eq!(lhs, rhs, "linearity failed at b={b} d1={d1:?} d2={d2:?}");
            }
        }
    }

    // ---------------------------------------------------------------
    // exact densities
    // ---------------------------------------------------------------

    #[test]
    fn half_range_set_has_exact_density_one_half_at_n2_q4() {
        // n = 2, q = 4: G_{b,x} constrains one 2-bit block by a parity,
        // so exactly 8 of the 16 possible d qualify, for every (b, x).
        for x in all_vectors(4, 2) {
            for b in [0u8, 1] {
                let count = all_bit_vectors(4).filter(|d| in_g_bx(d, b, &x).unwrap()).count();
                assert_eq!(count, 8, "|G_({b},{:?})| should be half of 16", x.entries());
            }
        }
    }

    #[test]
    fn claw_set_has_exact_density_one_quarter_at_n2_q4() {
        // The two branch conditions constrain disjoint blocks, so the
        // intersection has exactly (1/2)^2 of all d, for every (s, b, x).
        for s in all_vectors(4, 2) {
            for x in all_vectors(4, 2) {
                for b in [0u8, 1] {
                    let count =
                        all_bit_vectors(4).filter(|d| in_g_sbx(d, &s, b, &x).unwrap()).count();
                    assert_eq!(
                        count,
                        4,
                        "|G_({:?},{b},{:?})| should be a quarter of 16",
                        s.entries(),
                        x.entries()
                    );
                }
            }
        }
    }

    #[test]
    fn claw_set_has_exact_density_nine_sixteenths_at_n4_q4() {
        // n = 4: each branch condition frees two coordinates, holding
        // with density 1 - (1/2)^2 = 3/4; the product is 9/16 of 256.
        let cases = [
            (v(4, &[1, 2, 3, 0]), 0u8, v(4, &[2, 2, 0, 1])),
            (v(4, &[0, 0, 0, 0]), 0, v(4, &[3, 1, 2, 0])),
            (v(4, &[2, 1, 0, 3]), 1, v(4, &[1, 1, 1, 1])),
        ];
        for (s, b, x) in cases {
            let count = all_bit_vectors(8).filter(|d| in_g_sbx(d, &s, b, &x).unwrap()).count();
            assert_eq!(count, 144, "|G_{{s,b,x}}| should be 144 of 256");
        }
    }

    // ---------------------------------------------------------------
    // structural identities
    // ---------------------------------------------------------------

    #[test]
    fn branch_one_membership_is_branch_zero_at_the_shifted_point() {
        let s = v(4, &[1, 3]);
        for x in all_vectors(4, 2) {
            let shifted = x.add(&s).unwrap();
            for d in all_bit_vectors(4) {
                assert_eq!(
                    in_g_sbx(&d, &s, 1, &x).unwrap(),
                    in_g_sbx(&d, &s, 0, &shifted).unwrap(),
                    "definitions disagree at d={d:?} x={:?}",
                    x.entries()
                );
            }
        }
    }

    #[test]
    fn extra_bits_outside_the_witnessing_block_keep_membership() {
        // If d certifies membership through coordinate i, any d' that
        // agrees with d on block i still certifies it.
        let x = v(4, &[2, 1]);
        for b in [0u8, 1] {
            let block = b as usize; // witnessing range is a single block at n = 2
            for d in all_bit_vectors(4) {
                if !in_g_bx(&d, b, &x).unwrap() {
                    continue;
                }
                for mut d2 in all_bit_vectors(4) {
                    d2[block * 2] = d[block * 2];
                    d2[block * 2 + 1] = d[block * 2 + 1];
                    assert!(
                        in_g_bx(&d2, b, &x).unwrap(),
                        "agreeing on the witnessing block must preserve membership"
                    );
                }
            }
        }
    }

    #[test]
    fn equation_bit_matches_a_direct_mask_product() {
        let x0 = v(8, &[5, 2]);
        let s = v(8, &[3, 7]);
        let mask = claw_mask(&x0, &s).unwrap();
        for d in all_bit_vectors(6) {
            let direct = d.iter().zip(&mask).fold(0u8, |acc, (&a, &m)| acc ^ (a & m));
            assert_eq!(equation_bit(&d, &x0, &s).unwrap(), direct);
        }
    }

    // ---------------------------------------------------------------
    // guard rails
    // ---------------------------------------------------------------

    #[test]
    fn shape_violations_are_reported() {
        let x = v(4, &[2, 1]);
        let odd = v(4, &[2]);
        assert!(matches!(
            i_map(&[1, 0], 0, &x),
            Err(ProtocolError::BitLength { expected: 4, got: 2 })
        ));
        assert!(matches!(i_map(&[2, 0, 0, 0], 0, &x), Err(ProtocolError::NotABit { value: 2 })));
        assert!(matches!(in_g_bx(&[1, 0], 0, &odd), Err(ProtocolError::OddDimension { n: 1 })));
        assert!(matches!(i_map(&[1, 0, 0, 0], 2, &x), Err(ProtocolError::NotABit { value: 2 })));
    }
}
