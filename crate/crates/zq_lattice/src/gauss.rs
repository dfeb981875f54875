//! Truncated discrete Gaussian `D_{q,B}` over the centered representatives.
//!
//! The distribution assigns weight proportional to `exp(-pi t^2 / B^2)` to
//! each integer `t` with `|t| <= B` and weight zero elsewhere. Sampling is
//! by inverse CDF over the (tiny) integer support, so a seeded RNG gives a
//! fully reproducible stream.

use crate::error::{ZqError, ZqResult};
use crate::vector::ZqVector;
use rand::Rng;

/// Cached inverse-CDF table for one `(q, B)` pair.
#[derive(Debug, Clone)]
pub struct GaussianTable {
    q: u64,
    b: f64,
    support: Vec<i64>,
    cdf: Vec<f64>,
}

impl GaussianTable {
    /// Builds the table. Requires `B >= 1` and a support that fits strictly
    /// inside the centered representatives of Z_q.
    pub fn new(q: u64, b: f64) -> ZqResult<Self> {
        if !(2..=crate::vector::MAX_MODULUS).contains(&q) {
            return Err(ZqError::InvalidModulus(q));
        }
        if !b.is_finite() || b < 1.0 {
            return Err(ZqError::BadNoiseBound { b, q });
        }
        let radius = b.floor() as i64;
        // Support {-radius, ..., radius} must avoid wrapping: 2B+1 <= q.
        if 2 * radius + 1 > q as i64 {
            return Err(ZqError::BadNoiseBound { b, q });
        }
        let support: Vec<i64> = (-radius..=radius).collect();
        let mut cdf = Vec::with_capacity(support.len());
        let mut acc = 0.0;
        for &t in &support {
            let t = t as f64;
            acc += (-std::f64::consts::PI * t * t / (b * b)).exp();
            cdf.push(acc);
        }
        Ok(Self { q, b, support, cdf })
    }

    /// Modulus the table was built for.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Width parameter `B`.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Probability of drawing the centered value `t`.
    pub fn prob(&self, t: i64) -> f64 {
        let total = *self.cdf.last().expect("support is never empty");
        let radius = (self.support.len() / 2) as i64;
        if t.abs() > radius {
            return 0.0;
        }
        let t = t as f64;
        (-std::f64::consts::PI * t * t / (self.b * self.b)).exp() / total
    }

    /// Draws one centered value.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        let total = *self.cdf.last().expect("support is never empty");
        let u: f64 = rng.gen::<f64>() * total;
        let idx = self.cdf.partition_point(|&c| c <= u);
        self.support[idx.min(self.support.len() - 1)]
    }

    /// Draws a length-`len` error vector (canonical representatives).
    pub fn sample_vector<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> ZqVector {
        let centered: Vec<i64> = (0..len).map(|_| self.sample(rng)).collect();
        ZqVector::from_centered(self.q, &centered)
            .expect("support is checked against q at construction")
    }
}
