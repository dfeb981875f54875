//! Modeled compilation of modular linear register updates.
//!
//! The update acts on a bit register laid out little-endian as
//!
//! ```text
//! qubit 0                the selector bit b
//! qubits 1 … nk          x ∈ Z_q^n, k = bit_width(q) bits per coordinate
//! qubits nk+1 … (n+m)k   z ∈ Z_q^m
//!
//! action                 |b, x, z⟩ → |b, x, z + A'·(b,x)⟩   (mod q)
//! ```
//!
//! where `A'` is an `m × (n+1)` matrix whose first column multiplies `b`.
//! The threshold-gate decomposition of modular arithmetic is out of scope;
//! the update is emitted as a single opaque layer gate whose declared depth
//! is configuration metadata while its action table is the exact permutation
//! above.  Bit patterns that do not encode a value below `q` are fixed
//! points, which keeps the table a total bijection.

use zq_lattice::{bit_width, ZqMatrix};

use crate::circuit::{GateBasis, Layer, LayeredCircuit, QuantumLayer};
use crate::error::{DepthError, DepthResult};
use crate::exec::QUBIT_CAP;
use crate::gate::{GateOp, OpaqueLayerGate};

/// Declared depth of modeled modular-arithmetic primitives.
pub const MODELED_ARITHMETIC_DEPTH: u32 = 8;

/// Compiles `|b,x,z⟩ → |b,x,z+A'(b,x)⟩` into a single modeled layer.
pub fn compile_linear_map_modeled(a_prime: &ZqMatrix, q: u64) -> DepthResult<LayeredCircuit> {
    if a_prime.q() != q {
        return Err(DepthError::ModulusMismatch { expected: q, got: a_prime.q() });
    }
    let m = a_prime.rows();
    let n = a_prime.cols().saturating_sub(1);
    let k = bit_width(q) as usize;
    let total = 1 + (n + m) * k;
    if total > QUBIT_CAP {
        return Err(DepthError::TooManyQubits { qubits: total, cap: QUBIT_CAP });
    }

    let size = 1usize << total;
    let coordinate_mask = (1usize << k) - 1;
    let mut permutation = Vec::with_capacity(size);
    for index in 0..size {
        let b = (index & 1) as u64;
        let mut coordinates = Vec::with_capacity(n + m);
        let mut valid = true;
        for slot in 0..n + m {
            let value = (index >> (1 + slot * k)) & coordinate_mask;
            if value as u64 >= q {
                valid = false;
                break;
            }
            coordinates.push(value as u64);
        }
        if !valid {
            permutation.push(index as u64);
            continue;
        }
        let mut image = index & 1 | {
            let mut bits = 0usize;
            for (slot, &value) in coordinates.iter().take(n).enumerate() {
                bits |= (value as usize) << (1 + slot * k);
            }
            bits
        };
        for row in 0..m {
            let mut shift = u128::from(a_prime.entry(row, 0)) * u128::from(b);
            for column in 0..n {
                shift += u128::from(a_prime.entry(row, 1 + column)) * u128::from(coordinates[column]);
            }
            let updated = (u128::from(coordinates[n + row]) + shift) % u128::from(q);
            image |= (updated as usize) << (1 + (n + row) * k);
        }
        permutation.push(image as u64);
    }

    let gate = OpaqueLayerGate {
        label: format!("z += A'(b,x) mod {q} [{m}x{}]", n + 1),
        qubits: (0..total).collect(),
        declared_depth: MODELED_ARITHMETIC_DEPTH,
        declared_error: 0.0,
        permutation,
        phases: None,
    };
    let circuit = LayeredCircuit {
        r1: 0,
        r2: total,
        basis: GateBasis::Modeled,
        layers: vec![Layer::Quantum(QuantumLayer::new(vec![GateOp::Opaque(gate)]))],
    };
    circuit.validate()?;
    Ok(circuit)
}
