//! Sparse statevector over heterogeneous Z_q registers.
//!
//! A state is a finitely supported map from basis labels to real
//! amplitudes. A label assigns one canonical representative to each
//! register; register `i` ranges over `Z_{moduli[i]}`. The protocol states
//! all carry real amplitudes (the circuits involved are H/CNOT/phase-free
//! on the relevant registers), so amplitudes are `f64` reals.
//!
//! Support is kept in a `BTreeMap`, which fixes the iteration (and dump)
//! order to lexicographic over labels. The squared norm must stay within
//! `1e-9` of 1; constructors check it and unitary relabelings preserve it
//! exactly.

use crate::error::{SimError, SimResult};
use std::collections::BTreeMap;
use std::io::Write;

/// Tolerance on the squared norm of a state.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Hard cap on materialized support size.
pub const SUPPORT_CAP: u128 = 1 << 22;

/// Finitely supported real-amplitude state over Z_q registers.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    moduli: Vec<u64>,
    amps: BTreeMap<Vec<u64>, f64>,
}

impl SparseState {
    /// Builds a state from `(label, amplitude)` pairs, validating register
    /// ranges, rejecting duplicates, and checking normalization.
    pub fn from_amplitudes(
        moduli: Vec<u64>,
        pairs: impl IntoIterator<Item = (Vec<u64>, f64)>,
    ) -> SimResult<Self> {
        let mut amps = BTreeMap::new();
        for (label, amp) in pairs {
            check_label(&moduli, &label)?;
            if amp == 0.0 {
                continue;
            }
            if amps.insert(label, amp).is_some() {
                return Err(SimError::DuplicateBasis);
            }
            if amps.len() as u128 > SUPPORT_CAP {
                return Err(SimError::SupportTooLarge {
                    support: amps.len() as u128,
                    cap: SUPPORT_CAP,
                });
            }
        }
        let state = Self { moduli, amps };
        state.check_norm(NORM_TOLERANCE)?;
        Ok(state)
    }

    /// Point-mass state on a single label.
    pub fn basis_point(moduli: Vec<u64>, label: Vec<u64>) -> SimResult<Self> {
        Self::from_amplitudes(moduli, [(label, 1.0)])
    }

    /// Register moduli.
    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// Number of registers.
    pub fn registers(&self) -> usize {
        self.moduli.len()
    }

    /// Number of basis points carrying nonzero amplitude.
    pub fn support_len(&self) -> usize {
        self.amps.len()
    }

    /// Amplitude on a label (zero when absent).
    pub fn amp(&self, label: &[u64]) -> f64 {
        self.amps.get(label).copied().unwrap_or(0.0)
    }

    /// Lexicographic iteration over the support.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u64>, f64)> {
        self.amps.iter().map(|(k, &v)| (k, v))
    }

    /// Exact squared norm.
    pub fn norm_sq(&self) -> f64 {
        self.amps.values().map(|a| a * a).sum()
    }

    /// Errors unless the squared norm is within `tol` of 1.
    pub fn check_norm(&self, tol: f64) -> SimResult<()> {
        let norm_sq = self.norm_sq();
        if (norm_sq - 1.0).abs() > tol {
            return Err(SimError::NotNormalized { norm_sq });
        }
        Ok(())
    }

    /// Inner product `<self|other>` (real amplitudes).
    pub fn inner(&self, other: &Self) -> SimResult<f64> {
        if self.moduli != other.moduli {
            return Err(SimError::LayoutMismatch);
        }
        // Merge walk over the two sorted supports; iterate the smaller one
        // when sizes are lopsided.
        let (small, large) =
            if self.amps.len() <= other.amps.len() { (self, other) } else { (other, self) };
        let mut acc = 0.0;
        for (label, amp) in small.amps.iter() {
            if let Some(&b) = large.amps.get(label) {
                acc += amp * b;
            }
        }
        Ok(acc)
    }

    /// Squared L2 distance `|| self - other ||^2`.
    pub fn l2_distance_sq(&self, other: &Self) -> SimResult<f64> {
        if self.moduli != other.moduli {
            return Err(SimError::LayoutMismatch);
        }
        let mut acc = 0.0;
        let mut a_iter = self.amps.iter().peekable();
        let mut b_iter = other.amps.iter().peekable();
        loop {
            match (a_iter.peek(), b_iter.peek()) {
                (Some((ka, &va)), Some((kb, &vb))) => match ka.cmp(kb) {
                    std::cmp::Ordering::Less => {
                        acc += va * va;
                        a_iter.next();
                    }
                    std::cmp::Ordering::Greater => {
                        acc += vb * vb;
                        b_iter.next();
                    }
                    std::cmp::Ordering::Equal => {
                        acc += (va - vb) * (va - vb);
                        a_iter.next();
                        b_iter.next();
                    }
                },
                (Some((_, &va)), None) => {
                    acc += va * va;
                    a_iter.next();
                }
                (None, Some((_, &vb))) => {
                    acc += vb * vb;
                    b_iter.next();
                }
                (None, None) => break,
            }
        }
        Ok(acc)
    }

    /// Tensor product, registers of `other` appended after `self`.
    pub fn tensor(&self, other: &Self) -> SimResult<Self> {
        let support = self.amps.len() as u128 * other.amps.len() as u128;
        if support > SUPPORT_CAP {
            return Err(SimError::SupportTooLarge { support, cap: SUPPORT_CAP });
        }
        let mut moduli = self.moduli.clone();
        moduli.extend_from_slice(&other.moduli);
        let mut amps = BTreeMap::new();
        for (ka, va) in self.amps.iter() {
            for (kb, vb) in other.amps.iter() {
                let mut label = ka.clone();
                label.extend_from_slice(kb);
                amps.insert(label, va * vb);
            }
        }
        Ok(Self { moduli, amps })
    }

    /// Relabels every basis point through `f`. The map must be injective
    /// on the support (it models a unitary permutation), and every image
    /// must respect the register layout.
    pub fn map_basis<F>(&self, f: F) -> SimResult<Self>
    where
        F: Fn(&[u64]) -> Vec<u64>,
    {
        let mut amps = BTreeMap::new();
        for (label, &amp) in self.amps.iter() {
            let image = f(label);
            check_label(&self.moduli, &image)?;
            if amps.insert(image, amp).is_some() {
                return Err(SimError::BasisCollision);
            }
        }
        Ok(Self { moduli: self.moduli.clone(), amps })
    }

    /// Writes the state as JSON lines `{"basis": [...], "amp": ...}` in
    /// lexicographic basis order.
    pub fn dump_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (label, amp) in self.amps.iter() {
            let line = serde_json::json!({ "basis": label, "amp": amp });
            writeln!(w, "{line}")?;
        }
        Ok(())
    }
}

fn check_label(moduli: &[u64], label: &[u64]) -> SimResult<()> {
    if label.len() != moduli.len() {
        return Err(SimError::BasisShape { expected: moduli.len(), got: label.len() });
    }
    for (&value, &modulus) in label.iter().zip(moduli) {
        if value >= modulus {
            return Err(SimError::CoordinateOutOfRange { value, modulus });
        }
    }
    Ok(())
}
