//! Born-rule measurements and the bitwise Hadamard measurement.
//!
//! Computational-basis measurements act on a contiguous register range:
//! the marginal distribution is enumerated in lexicographic outcome order
//! (so seeded runs are reproducible), one outcome is drawn, and the state
//! collapses onto the matching slice.
//!
//! The Hadamard measurement reinterprets the leading `(b, x)` block as
//! `1 + n*ceil(log2 q)` qubits via the little-endian binary encoding,
//! applies a Hadamard to every qubit, and measures them all. For a basis
//! vector `v` and outcome `w` the transform contributes the phase
//! `(-1)^(v . w)`, so a two-point state `(|0, x0> + |1, x1>)/sqrt(2)`
//! yields outcomes `(c, d)` with
//!
//! ```text
//!     Pr[c, d]  ∝  | (-1)^(J(x0) . d) + (-1)^(c + J(x1) . d) |^2,
//! ```
//!
//! which vanishes unless `c = d . (J(x0) xor J(x1))`.

use crate::error::{SimError, SimResult};
use crate::state::{SparseState, SUPPORT_CAP};
use rand::Rng;
use std::collections::BTreeMap;
use zq_lattice::{binary_encode, bit_width, ZqVector};

/// Audit record for one measurement.
#[derive(Debug, Clone)]
pub struct MeasurementRecord {
    /// Index of the first measured register.
    pub first_register: usize,
    /// Number of registers (or, for the Hadamard case, qubits) measured.
    pub count: usize,
    /// Observed outcome, one entry per measured register/qubit.
    pub outcome: Vec<u64>,
    /// Pre-measurement probability of that outcome.
    pub probability: f64,
    /// Uniform draw that selected it.
    pub draw: f64,
}

/// Exact marginal distribution over a register range, in lexicographic
/// outcome order.
pub fn born_distribution(
    state: &SparseState,
    first: usize,
    count: usize,
) -> SimResult<Vec<(Vec<u64>, f64)>> {
    check_range(state, first, count)?;
    let mut marginal: BTreeMap<Vec<u64>, f64> = BTreeMap::new();
    for (label, amp) in state.iter() {
        *marginal.entry(label[first..first + count].to_vec()).or_insert(0.0) += amp * amp;
    }
    Ok(marginal.into_iter().collect())
}

/// Measures the register range `[first, first+count)`, collapsing the state.
pub fn measure_registers<R: Rng + ?Sized>(
    state: &SparseState,
    first: usize,
    count: usize,
    rng: &mut R,
) -> SimResult<(Vec<u64>, SparseState, MeasurementRecord)> {
    let marginal = born_distribution(state, first, count)?;
    if marginal.is_empty() {
        return Err(SimError::EmptyState);
    }
    let draw: f64 = rng.gen();
    let mut cumulative = 0.0;
    let mut selected = marginal.len() - 1;
    for (i, (_, p)) in marginal.iter().enumerate() {
        cumulative += p;
        if draw < cumulative {
            selected = i;
            break;
        }
    }
    let (outcome, probability) = marginal[selected].clone();

    let scale = 1.0 / probability.sqrt();
    let collapsed = SparseState::from_amplitudes(
        state.moduli().to_vec(),
        state
            .iter()
            .filter(|(label, _)| label[first..first + count] == outcome[..])
            .map(|(label, amp)| (label.clone(), amp * scale)),
    )?;
    let record =
        MeasurementRecord { first_register: first, count, outcome: outcome.clone(), probability, draw };
    Ok((outcome, collapsed, record))
}

/// Measures the first `count` registers.
pub fn measure_prefix<R: Rng + ?Sized>(
    state: &SparseState,
    count: usize,
    rng: &mut R,
) -> SimResult<(Vec<u64>, SparseState, MeasurementRecord)> {
    measure_registers(state, 0, count, rng)
}

/// Measures the last `count` registers.
pub fn measure_suffix<R: Rng + ?Sized>(
    state: &SparseState,
    count: usize,
    rng: &mut R,
) -> SimResult<(Vec<u64>, SparseState, MeasurementRecord)> {
    let first = state
        .registers()
        .checked_sub(count)
        .ok_or(SimError::BasisShape { expected: state.registers(), got: count })?;
    measure_registers(state, first, count, rng)
}

/// Measures the trailing m-register block of a committed state, returning
/// the observed image vector and the collapsed state (still carrying the
/// now-classical block).
pub fn measure_last_register<R: Rng + ?Sized>(
    state: &SparseState,
    m: usize,
    rng: &mut R,
) -> SimResult<(ZqVector, SparseState, MeasurementRecord)> {
    let (outcome, collapsed, record) = measure_suffix(state, m, rng)?;
    let q = state.moduli()[state.registers() - m];
    let y = ZqVector::new(q, outcome).map_err(SimError::Lattice)?;
    Ok((y, collapsed, record))
}

/// Measures the `(b, x)` block of a collapsed state in the computational
/// basis.
pub fn measure_committed_basis<R: Rng + ?Sized>(
    state: &SparseState,
    n: usize,
    rng: &mut R,
) -> SimResult<(u64, ZqVector, MeasurementRecord)> {
    if state.registers() < n + 1 || state.moduli()[0] != 2 {
        return Err(SimError::LayoutMismatch);
    }
    let (outcome, _, record) = measure_prefix(state, n + 1, rng)?;
    let q = state.moduli()[1];
    let x = ZqVector::new(q, outcome[1..].to_vec()).map_err(SimError::Lattice)?;
    Ok((outcome[0], x, record))
}

/// Number of qubits the Hadamard measurement acts on: the `b` bit plus the
/// binary encoding of the n-coordinate block.
fn hadamard_qubits(state: &SparseState, n: usize) -> SimResult<(u32, usize)> {
    if state.registers() < n + 1 || state.moduli()[0] != 2 {
        return Err(SimError::LayoutMismatch);
    }
    let q = state.moduli()[1];
    if state.moduli()[1..=n].iter().any(|&m| m != q) {
        return Err(SimError::LayoutMismatch);
    }
    let k = bit_width(q);
    let qubits = 1 + n * k as usize;
    let total = 1u128 << qubits;
    if total > SUPPORT_CAP {
        return Err(SimError::SupportTooLarge { support: total, cap: SUPPORT_CAP });
    }
    Ok((k, qubits))
}

/// Packs a basis label's `(b, x)` block into a qubit-index bitmask,
/// little-endian within each coordinate.
fn pack_bits(label: &[u64], n: usize, k: u32, q: u64) -> u64 {
    let mut bits = label[0];
    for (i, &coord) in label[1..=n].iter().enumerate() {
        for (j, &bit) in binary_encode(coord, q).iter().enumerate() {
            bits |= (bit as u64) << (1 + i * k as usize + j);
        }
    }
    bits
}

/// Exact outcome distribution of the Hadamard measurement over the leading
/// `(b, x)` block; index `w` packs `c` in bit 0 and `d` little-endian above.
pub fn hadamard_distribution(state: &SparseState, n: usize) -> SimResult<Vec<f64>> {
    let (k, qubits) = hadamard_qubits(state, n)?;
    let q = state.moduli()[1];
    let total = 1usize << qubits;

    // Group amplitudes by the unmeasured suffix; outcomes from different
    // suffixes add probabilities, not amplitudes.
    let mut groups: BTreeMap<Vec<u64>, Vec<(u64, f64)>> = BTreeMap::new();
    for (label, amp) in state.iter() {
        groups
            .entry(label[n + 1..].to_vec())
            .or_default()
            .push((pack_bits(label, n, k, q), amp));
    }

    let mut probs = vec![0.0; total];
    for members in groups.values() {
        for (w, slot) in probs.iter_mut().enumerate() {
            let mut amp_w = 0.0;
            for &(v, a) in members {
                let sign = if (v & w as u64).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                amp_w += sign * a;
            }
            *slot += amp_w * amp_w / total as f64;
        }
    }
    Ok(probs)
}

/// Hadamard-measures the `(b, x)` block, returning the equation bit `c` and
/// the bit vector `d` of length `n * ceil(log2 q)`.
pub fn hadamard_measure<R: Rng + ?Sized>(
    state: &SparseState,
    n: usize,
    rng: &mut R,
) -> SimResult<(u64, Vec<u8>, MeasurementRecord)> {
    let (k, qubits) = hadamard_qubits(state, n)?;
    let probs = hadamard_distribution(state, n)?;
    let draw: f64 = rng.gen();
    let mut cumulative = 0.0;
    let mut selected = probs.len() - 1;
    for (w, &p) in probs.iter().enumerate() {
        cumulative += p;
        if draw < cumulative {
            selected = w;
            break;
        }
    }
    let c = (selected & 1) as u64;
    let d: Vec<u8> =
        (0..n * k as usize).map(|j| ((selected >> (1 + j)) & 1) as u8).collect();
    let record = MeasurementRecord {
        first_register: 0,
        count: qubits,
        outcome: (0..qubits).map(|j| ((selected >> j) & 1) as u64).collect(),
        probability: probs[selected],
        draw,
    };
    Ok((c, d, record))
}

fn check_range(state: &SparseState, first: usize, count: usize) -> SimResult<()> {
    if count == 0 || first + count > state.registers() {
        return Err(SimError::BasisShape { expected: state.registers(), got: first + count });
    }
    Ok(())
}
