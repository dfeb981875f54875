//! Vectors and matrices over Z_q with exact integer norms.
//!
//! Entries are canonical representatives in `[0, q)`. Euclidean norms are
//! taken over centered representatives and reported as exact squared
//! integers in `u128`, so comparisons against rational thresholds never
//! touch floating point.
//!
//! Wire schema (shared by vectors and matrices): a JSON object
//! `{"q": int, "dims": [rows, cols], "entries": [row-major ints]}`.
//! Vectors are column-shaped, `dims = [len, 1]`.

use crate::encode::centered_rep;
use crate::error::{ZqError, ZqResult};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Largest supported modulus; keeps centered squares inside `i128`.
pub const MAX_MODULUS: u64 = 1 << 40;

fn check_modulus(q: u64) -> ZqResult<u64> {
    if !(2..=MAX_MODULUS).contains(&q) {
        return Err(ZqError::InvalidModulus(q));
    }
    Ok(q)
}

fn check_entries(q: u64, entries: &[u64]) -> ZqResult<()> {
    for &value in entries {
        if value >= q {
            return Err(ZqError::EntryOutOfRange { value, q });
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct Wire {
    q: u64,
    dims: [usize; 2],
    entries: Vec<u64>,
}

/// Column vector over Z_q, entries stored as canonical representatives.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZqVector {
    q: u64,
    entries: Vec<u64>,
}

impl ZqVector {
    /// Builds a vector after validating the modulus and entry ranges.
    pub fn new(q: u64, entries: Vec<u64>) -> ZqResult<Self> {
        check_modulus(q)?;
        check_entries(q, &entries)?;
        Ok(Self { q, entries })
    }

    /// All-zero vector of the given length.
    pub fn zero(q: u64, len: usize) -> ZqResult<Self> {
        check_modulus(q)?;
        Ok(Self { q, entries: vec![0; len] })
    }

    /// Builds a vector from centered (signed) representatives.
    pub fn from_centered(q: u64, centered: &[i64]) -> ZqResult<Self> {
        check_modulus(q)?;
        let qi = q as i128;
        let entries = centered
            .iter()
            .map(|&c| (c as i128).rem_euclid(qi) as u64)
            .collect();
        Ok(Self { q, entries })
    }

    /// Samples a uniform vector.
    pub fn uniform<R: Rng + ?Sized>(q: u64, len: usize, rng: &mut R) -> ZqResult<Self> {
        check_modulus(q)?;
        let entries = (0..len).map(|_| rng.gen_range(0..q)).collect();
        Ok(Self { q, entries })
    }

    /// Modulus.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Number of coordinates.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True when the vector has no coordinates.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Canonical entries in `[0, q)`.
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Centered representatives in `{-ceil(q/2)+1, ..., floor(q/2)}`.
    pub fn centered(&self) -> Vec<i64> {
        self.entries.iter().map(|&x| centered_rep(x, self.q)).collect()
    }

    /// True when every canonical entry is zero.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    fn check_compatible(&self, other: &Self) -> ZqResult<()> {
        if self.q != other.q {
            return Err(ZqError::ModulusMismatch(self.q, other.q));
        }
        if self.len() != other.len() {
            return Err(ZqError::DimensionMismatch { expected: self.len(), got: other.len() });
        }
        Ok(())
    }

    /// Coordinate-wise sum.
    pub fn add(&self, other: &Self) -> ZqResult<Self> {
        self.check_compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| add_mod(a, b, self.q))
            .collect();
        Ok(Self { q: self.q, entries })
    }

    /// Coordinate-wise difference.
    pub fn sub(&self, other: &Self) -> ZqResult<Self> {
        self.check_compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| sub_mod(a, b, self.q))
            .collect();
        Ok(Self { q: self.q, entries })
    }

    /// Scalar multiple.
    pub fn scale(&self, factor: u64) -> Self {
        let f = (factor % self.q) as u128;
        let entries = self
            .entries
            .iter()
            .map(|&a| ((a as u128 * f) % self.q as u128) as u64)
            .collect();
        Self { q: self.q, entries }
    }

    /// Exact squared Euclidean norm of the centered representatives.
    pub fn norm_sq(&self) -> u128 {
        self.entries
            .iter()
            .map(|&x| {
                let c = centered_rep(x, self.q) as i128;
                (c * c) as u128
            })
            .sum()
    }

    /// Largest centered absolute value.
    pub fn inf_norm(&self) -> u64 {
        self.entries
            .iter()
            .map(|&x| centered_rep(x, self.q).unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}

impl Serialize for ZqVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire { q: self.q, dims: [self.entries.len(), 1], entries: self.entries.clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZqVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = Wire::deserialize(d)?;
        if wire.dims[1] != 1 || wire.dims[0] != wire.entries.len() {
            return Err(serde::de::Error::custom(format!(
                "vector dims {:?} inconsistent with {} entries",
                wire.dims,
                wire.entries.len()
            )));
        }
        ZqVector::new(wire.q, wire.entries).map_err(serde::de::Error::custom)
    }
}

/// Row-major matrix over Z_q.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZqMatrix {
    q: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl ZqMatrix {
    /// Builds a matrix after validating the modulus, shape, and ranges.
    pub fn new(q: u64, rows: usize, cols: usize, entries: Vec<u64>) -> ZqResult<Self> {
        check_modulus(q)?;
        if entries.len() != rows * cols {
            return Err(ZqError::ShapeMismatch { rows, cols, len: entries.len() });
        }
        check_entries(q, &entries)?;
        Ok(Self { q, rows, cols, entries })
    }

    /// All-zero matrix.
    pub fn zero(q: u64, rows: usize, cols: usize) -> ZqResult<Self> {
        check_modulus(q)?;
        Ok(Self { q, rows, cols, entries: vec![0; rows * cols] })
    }

    /// Identity matrix.
    pub fn identity(q: u64, n: usize) -> ZqResult<Self> {
        let mut m = Self::zero(q, n, n)?;
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        Ok(m)
    }

    /// Samples a uniform matrix.
    pub fn uniform<R: Rng + ?Sized>(q: u64, rows: usize, cols: usize, rng: &mut R) -> ZqResult<Self> {
        check_modulus(q)?;
        let entries = (0..rows * cols).map(|_| rng.gen_range(0..q)).collect();
        Ok(Self { q, rows, cols, entries })
    }

    /// Modulus.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Row count.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Column count.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major entry buffer.
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Single entry.
    pub fn entry(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.cols + col]
    }

    /// One row as a slice.
    pub fn row(&self, row: usize) -> &[u64] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    /// Stacks `top` over `bottom`.
    pub fn vstack(top: &ZqMatrix, bottom: &ZqMatrix) -> ZqResult<ZqMatrix> {
        if top.q != bottom.q {
            return Err(ZqError::ModulusMismatch(top.q, bottom.q));
        }
        if top.cols != bottom.cols {
            return Err(ZqError::DimensionMismatch { expected: top.cols, got: bottom.cols });
        }
        let mut entries = top.entries.clone();
        entries.extend_from_slice(&bottom.entries);
        ZqMatrix::new(top.q, top.rows + bottom.rows, top.cols, entries)
    }

    /// Matrix-vector product `A x`.
    pub fn mul_vec(&self, x: &ZqVector) -> ZqResult<ZqVector> {
        if self.q != x.q() {
            return Err(ZqError::ModulusMismatch(self.q, x.q()));
        }
        if x.len() != self.cols {
            return Err(ZqError::DimensionMismatch { expected: self.cols, got: x.len() });
        }
        let qw = self.q as u128;
        let xs = x.entries();
        let entries = (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let mut acc: u128 = 0;
                for (a, b) in row.iter().zip(xs) {
                    acc += *a as u128 * *b as u128;
                    // Keep the accumulator far from overflow for long rows.
                    if acc >= 1 << 120 {
                        acc %= qw;
                    }
                }
                (acc % qw) as u64
            })
            .collect();
        Ok(ZqVector { q: self.q, entries })
    }
}

impl Serialize for ZqMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire { q: self.q, dims: [self.rows, self.cols], entries: self.entries.clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ZqMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = Wire::deserialize(d)?;
        ZqMatrix::new(wire.q, wire.dims[0], wire.dims[1], wire.entries)
            .map_err(serde::de::Error::custom)
    }
}

fn add_mod(a: u64, b: u64, q: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % q as u128) as u64
}

fn sub_mod(a: u64, b: u64, q: u64) -> u64 {
    let s = a as u128 + (q - b) as u128;
    (s % q as u128) as u64
}
