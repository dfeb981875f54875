//! Protocol parameters and their derived thresholds.
//!
//! The interactive test is governed by `(lambda, ell, n, m, q, B_L, B_V,
//! epsilon, C)`. Three derived quantities drive every verdict:
//!
//! ```text
//! invert radius   q / (C * sqrt(n * log2 q))     preimage decoding bound
//! accept radius   2q / (C * sqrt(n * log2 q))    verifier norm test
//! B_P             q / (C * sqrt(m * n * log2 q)) prover window bound
//! r               floor(log2 B_P)                window exponent, needs r >= 1
//! ```
//!
//! Every formula uses `C` only through its square, so the constant is
//! stored as an exact rational `C^2` (configs may give either `c` or
//! `c_squared`); boundary presets like `C^2 = 128/5` are then exactly
//! representable. `B_L`, `B_V`, and `epsilon` are exact rationals too.
//! When `log2 q` is an integer (every runnable preset uses a power-of-two
//! modulus) all threshold comparisons are carried out by exact
//! cross-multiplication in `u128`; otherwise an `f64` approximation is
//! used and flagged as such.

use crate::encode::{bit_width, log2_exact};
use crate::error::{ZqError, ZqResult};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact non-negative rational with `u128` numerator and denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ratio {
    num: u128,
    den: u128,
}

impl Ratio {
    /// Builds `num/den` in lowest terms; the denominator must be nonzero.
    pub fn new(num: u128, den: u128) -> ZqResult<Self> {
        if den == 0 {
            return Err(ZqError::BadParameter { name: "ratio", detail: "zero denominator".into() });
        }
        let g = gcd(num, den).max(1);
        Ok(Self { num: num / g, den: den / g })
    }

    /// Integer as a ratio.
    pub fn from_int(v: u128) -> Self {
        Self { num: v, den: 1 }
    }

    /// Parses `"2"`, `"1.125"`, or `"9/8"`.
    pub fn parse(text: &str) -> ZqResult<Self> {
        let bad = |detail: String| ZqError::BadParameter { name: "ratio", detail };
        let text = text.trim();
        if let Some((a, b)) = text.split_once('/') {
            let num: u128 =
                a.trim().parse().map_err(|_| bad(format!("bad numerator in {text:?}")))?;
            let den: u128 =
                b.trim().parse().map_err(|_| bad(format!("bad denominator in {text:?}")))?;
            return Self::new(num, den);
        }
        if let Some((int, frac)) = text.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad(format!("bad decimal {text:?}")));
            }
            let int: u128 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| bad(format!("bad decimal {text:?}")))?
            };
            let scale = 10u128
                .checked_pow(frac.len() as u32)
                .ok_or(ZqError::RatioOverflow("decimal parse"))?;
            let frac: u128 = frac.parse().map_err(|_| bad(format!("bad decimal {text:?}")))?;
            let num = int
                .checked_mul(scale)
                .and_then(|v| v.checked_add(frac))
                .ok_or(ZqError::RatioOverflow("decimal parse"))?;
            return Self::new(num, scale);
        }
        let v: u128 = text.parse().map_err(|_| bad(format!("bad integer {text:?}")))?;
        Ok(Self::from_int(v))
    }

    /// Numerator in lowest terms.
    pub fn num(&self) -> u128 {
        self.num
    }

    /// Denominator in lowest terms.
    pub fn den(&self) -> u128 {
        self.den
    }

    /// True when the value is zero.
    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Floating-point view, for display and for non-exact moduli.
    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Exact product.
    pub fn checked_mul(&self, other: &Ratio) -> ZqResult<Ratio> {
        // Cross-reduce first so well-conditioned inputs stay small.
        let g1 = gcd(self.num, other.den).max(1);
        let g2 = gcd(other.num, self.den).max(1);
        let num = (self.num / g1)
            .checked_mul(other.num / g2)
            .ok_or(ZqError::RatioOverflow("mul"))?;
        let den = (self.den / g2)
            .checked_mul(other.den / g1)
            .ok_or(ZqError::RatioOverflow("mul"))?;
        Ratio::new(num, den)
    }

    /// Exact product with an integer.
    pub fn checked_mul_int(&self, v: u128) -> ZqResult<Ratio> {
        self.checked_mul(&Ratio::from_int(v))
    }

    /// Exact sum.
    pub fn checked_add(&self, other: &Ratio) -> ZqResult<Ratio> {
        // Common denominator lcm(b, d) keeps intermediates small.
        let g = gcd(self.den, other.den).max(1);
        let left = self
            .num
            .checked_mul(other.den / g)
            .ok_or(ZqError::RatioOverflow("add"))?;
        let right = other
            .num
            .checked_mul(self.den / g)
            .ok_or(ZqError::RatioOverflow("add"))?;
        let num = left.checked_add(right).ok_or(ZqError::RatioOverflow("add"))?;
        let den = (self.den / g)
            .checked_mul(other.den)
            .ok_or(ZqError::RatioOverflow("add"))?;
        Ratio::new(num, den)
    }

    /// Exact quotient.
    pub fn checked_div(&self, other: &Ratio) -> ZqResult<Ratio> {
        if other.num == 0 {
            return Err(ZqError::BadParameter { name: "ratio", detail: "division by zero".into() });
        }
        self.checked_mul(&Ratio { num: other.den, den: other.num })
    }

    /// Exact square.
    pub fn checked_square(&self) -> ZqResult<Ratio> {
        self.checked_mul(self)
    }

    /// Exact comparison by cross-multiplication.
    pub fn try_cmp(&self, other: &Ratio) -> ZqResult<Ordering> {
        let lhs = self.num.checked_mul(other.den).ok_or(ZqError::RatioOverflow("cmp"))?;
        let rhs = other.num.checked_mul(self.den).ok_or(ZqError::RatioOverflow("cmp"))?;
        Ok(lhs.cmp(&rhs))
    }

    /// Exact comparison against an integer.
    pub fn try_cmp_int(&self, v: u128) -> ZqResult<Ordering> {
        self.try_cmp(&Ratio::from_int(v))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            num: u128,
            den: u128,
        }
        let w = Wire::deserialize(d)?;
        Ratio::new(w.num, w.den).map_err(serde::de::Error::custom)
    }
}

/// A squared threshold, exact when `log2 q` is an integer.
#[derive(Debug, Clone, Copy)]
pub enum Threshold {
    /// Exact rational value (power-of-two modulus).
    Exact(Ratio),
    /// Floating approximation (non-power-of-two modulus).
    Approx(f64),
}

impl Threshold {
    /// Floating view for reports.
    pub fn as_f64(&self) -> f64 {
        match self {
            Threshold::Exact(r) => r.as_f64(),
            Threshold::Approx(v) => *v,
        }
    }

    /// True when the comparison is exact.
    pub fn is_exact(&self) -> bool {
        matches!(self, Threshold::Exact(_))
    }

    /// Whether the integer `v` lies at or below the threshold (`v <= T`).
    pub fn admits(&self, v: u128) -> ZqResult<bool> {
        match self {
            Threshold::Exact(r) => Ok(r.try_cmp_int(v)? != Ordering::Less),
            Threshold::Approx(t) => Ok((v as f64) <= *t),
        }
    }
}

/// Outcome of one derived-condition check, kept exact where possible.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    /// Whether the inequality holds.
    pub holds: bool,
    /// Whether it was decided by exact arithmetic.
    pub exact: bool,
    /// Left side, for display.
    pub lhs: f64,
    /// Right side, for display.
    pub rhs: f64,
}

/// Full parameter set for one protocol configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolParams {
    /// Security parameter, descriptive at desk scale.
    pub lambda: u32,
    /// Auxiliary length parameter of the asymptotic description.
    pub ell: u32,
    /// Secret dimension.
    pub n: usize,
    /// Sample count (rows of the public matrix).
    pub m: usize,
    /// Modulus.
    pub q: u64,
    /// Hardness noise bound of the underlying assumption.
    pub b_l: Ratio,
    /// Verifier sampling noise bound.
    pub b_v: Ratio,
    /// Closeness budget for state preparation.
    pub epsilon: Ratio,
    /// Square of the radius constant `C` (all formulas use `C` squared).
    pub c_sq: Ratio,
}

impl ProtocolParams {
    /// Validates ranges and builds the set from a rational `C`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        lambda: u32,
        ell: u32,
        n: usize,
        m: usize,
        q: u64,
        b_l: Ratio,
        b_v: Ratio,
        epsilon: Ratio,
        c: Ratio,
    ) -> ZqResult<Self> {
        Self::with_c_squared(lambda, ell, n, m, q, b_l, b_v, epsilon, c.checked_square()?)
    }

    /// Validates ranges and builds the set from an exact `C^2`.
    #[allow(clippy::too_many_arguments)]
    pub fn with_c_squared(
        lambda: u32,
        ell: u32,
        n: usize,
        m: usize,
        q: u64,
        b_l: Ratio,
        b_v: Ratio,
        epsilon: Ratio,
        c_sq: Ratio,
    ) -> ZqResult<Self> {
        if n == 0 {
            return Err(ZqError::BadParameter { name: "n", detail: "must be positive".into() });
        }
        if m == 0 {
            return Err(ZqError::BadParameter { name: "m", detail: "must be positive".into() });
        }
        if !(2..=crate::vector::MAX_MODULUS).contains(&q) {
            return Err(ZqError::InvalidModulus(q));
        }
        if c_sq.is_zero() {
            return Err(ZqError::BadParameter { name: "c", detail: "must be positive".into() });
        }
        if epsilon.is_zero() {
            return Err(ZqError::BadParameter {
                name: "epsilon",
                detail: "must be positive".into(),
            });
        }
        if b_v.try_cmp_int(1)? == Ordering::Less {
            return Err(ZqError::BadParameter { name: "b_v", detail: "must be >= 1".into() });
        }
        Ok(Self { lambda, ell, n, m, q, b_l, b_v, epsilon, c_sq })
    }

    /// The radius constant as a float, for display.
    pub fn c_f64(&self) -> f64 {
        self.c_sq.as_f64().sqrt()
    }

    /// Bits per coordinate in the binary encoding, `ceil(log2 q)`.
    pub fn j_width(&self) -> u32 {
        bit_width(self.q)
    }

    /// Total bits in an encoded secret-register vector.
    pub fn d_bits(&self) -> usize {
        self.n * self.j_width() as usize
    }

    /// `log2 q` when the modulus is a power of two.
    pub fn log2q_exact(&self) -> Option<u32> {
        log2_exact(self.q)
    }

    /// `log2 q` as a float.
    pub fn log2q_f64(&self) -> f64 {
        (self.q as f64).log2()
    }

    fn q_sq(&self) -> u128 {
        (self.q as u128) * (self.q as u128)
    }

    /// Squared radius `q^2 / (C^2 n log2 q)` used by preimage decoding.
    pub fn invert_radius_sq(&self) -> ZqResult<Threshold> {
        self.scaled_radius_sq(1, self.n as u128)
    }

    /// Squared radius `4 q^2 / (C^2 n log2 q)` used by the verifier's norm
    /// test; equals the squared matrix-distance requirement.
    pub fn accept_radius_sq(&self) -> ZqResult<Threshold> {
        self.scaled_radius_sq(4, self.n as u128)
    }

    /// Squared prover window bound `B_P^2 = q^2 / (C^2 m n log2 q)`.
    pub fn b_p_sq(&self) -> ZqResult<Threshold> {
        self.scaled_radius_sq(1, (self.m as u128) * (self.n as u128))
    }

    fn scaled_radius_sq(&self, scale: u128, dims: u128) -> ZqResult<Threshold> {
        match self.log2q_exact() {
            Some(k) => {
                let denom = self.c_sq.checked_mul_int(dims * k as u128)?;
                let value = Ratio::from_int(self.q_sq())
                    .checked_mul_int(scale)?
                    .checked_div(&denom)?;
                Ok(Threshold::Exact(value))
            }
            None => {
                let qf = self.q as f64;
                Ok(Threshold::Approx(
                    scale as f64 * qf * qf
                        / (self.c_sq.as_f64() * dims as f64 * self.log2q_f64()),
                ))
            }
        }
    }

    /// Window exponent `r = floor(log2 B_P)`; `None` when `B_P < 2`, in
    /// which case no state-preparation window exists.
    pub fn window_r(&self) -> ZqResult<Option<u32>> {
        match self.b_p_sq()? {
            Threshold::Exact(bp_sq) => {
                let mut r = 0u32;
                // Largest r with 4^r <= B_P^2, i.e. 2^r <= B_P.
                while r < 63 && bp_sq.try_cmp_int(1u128 << (2 * (r + 1)))? != Ordering::Less {
                    r += 1;
                }
                Ok((r >= 1).then_some(r))
            }
            Threshold::Approx(bp_sq) => {
                if bp_sq < 4.0 {
                    return Ok(None);
                }
                Ok(Some((bp_sq.sqrt().log2().floor()) as u32))
            }
        }
    }

    /// Half-width `2^(r-1)` of the window `I = {-2^(r-1), ..., 2^(r-1)-1}`.
    pub fn window_halfwidth(&self) -> ZqResult<Option<u64>> {
        Ok(self.window_r()?.map(|r| 1u64 << (r - 1)))
    }

    /// Condition `q >= B_V C sqrt(m n log2 q)`, squared for exactness.
    pub fn condition_i(&self) -> ZqResult<ConditionReport> {
        let bv_sq = self.b_v.checked_square()?;
        let dims = (self.m as u128) * (self.n as u128);
        match self.log2q_exact() {
            Some(k) => {
                let rhs = bv_sq.checked_mul(&self.c_sq)?.checked_mul_int(dims * k as u128)?;
                let lhs = Ratio::from_int(self.q_sq());
                Ok(ConditionReport {
                    holds: lhs.try_cmp(&rhs)? != Ordering::Less,
                    exact: true,
                    lhs: lhs.as_f64(),
                    rhs: rhs.as_f64(),
                })
            }
            None => {
                let lhs = self.q_sq() as f64;
                let rhs =
                    bv_sq.as_f64() * self.c_sq.as_f64() * dims as f64 * self.log2q_f64();
                Ok(ConditionReport { holds: lhs >= rhs, exact: false, lhs, rhs })
            }
        }
    }

    /// Preparation precondition `q >= 8 m B_V C sqrt(m n log2 q) / epsilon`,
    /// squared for exactness.
    pub fn preparation_precondition(&self) -> ZqResult<ConditionReport> {
        let bv_sq = self.b_v.checked_square()?;
        let eps_sq = self.epsilon.checked_square()?;
        let m = self.m as u128;
        let dims = m * m * m * self.n as u128;
        match self.log2q_exact() {
            Some(k) => {
                let lhs = Ratio::from_int(self.q_sq()).checked_mul(&eps_sq)?;
                let rhs = bv_sq
                    .checked_mul(&self.c_sq)?
                    .checked_mul_int(64 * dims * k as u128)?;
                Ok(ConditionReport {
                    holds: lhs.try_cmp(&rhs)? != Ordering::Less,
                    exact: true,
                    lhs: lhs.as_f64(),
                    rhs: rhs.as_f64(),
                })
            }
            None => {
                let lhs = self.q_sq() as f64 * eps_sq.as_f64();
                let rhs = 64.0
                    * bv_sq.as_f64()
                    * self.c_sq.as_f64()
                    * dims as f64
                    * self.log2q_f64();
                Ok(ConditionReport { holds: lhs >= rhs, exact: false, lhs, rhs })
            }
        }
    }
}
