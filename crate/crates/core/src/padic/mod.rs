//! Truncated p-adic scalars, the cyclotomic value ring, and the additive
//! character of Q_p.

mod cyclo;
mod scalar;

pub use cyclo::{psi_of, CycloField, CycloRational};
pub use scalar::TruncatedScalar;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters shared by every object in a computation.
///
/// The field is Q_p (so q = p). The integral lattice is
/// `L = p^e gl_n(Z_p)`, quotients are taken at level `m`
/// (modulo `L_m = p^m L`), and scalars carry `precision` p-adic digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SessionParams {
    pub p: u64,
    pub n: usize,
    pub e: u32,
    pub m: u32,
    pub precision: u32,
}

impl SessionParams {
    /// Builds parameters with the default precision `2m + 2e + 2`.
    pub fn new(p: u64, n: usize, e: u32, m: u32) -> Result<Self> {
        Self::with_precision(p, n, e, m, Self::guard_precision(e, m))
    }

    pub fn with_precision(p: u64, n: usize, e: u32, m: u32, precision: u32) -> Result<Self> {
        let sp = SessionParams { p, n, e, m, precision };
        sp.validate()?;
        Ok(sp)
    }

    /// Smallest admissible working precision for depth `e` and level `m`.
    pub fn guard_precision(e: u32, m: u32) -> u32 {
        2 * m + 2 * e + 2
    }

    /// Smallest lattice depth for which the exponential series converges on L.
    pub fn min_depth(p: u64) -> u32 {
        if p == 2 {
            2
        } else {
            1
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 2 || !is_prime(self.p) {
            return Err(Error::InvalidParams(format!("p = {} is not a prime", self.p)));
        }
        if self.n == 0 {
            return Err(Error::InvalidParams("matrix size must be at least 1".into()));
        }
        let min_e = Self::min_depth(self.p);
        if self.e < min_e {
            return Err(Error::InvalidParams(format!(
                "depth e = {} is too small for p = {} (need e >= {})",
                self.e, self.p, min_e
            )));
        }
        let guard = Self::guard_precision(self.e, self.m);
        if self.precision < guard {
            return Err(Error::InvalidParams(format!(
                "precision {} is below the guard 2m + 2e + 2 = {}",
                self.precision, guard
            )));
        }
        match checked_pow(self.p, self.precision) {
            Some(v) if v < (1u64 << 62) => Ok(()),
            _ => Err(Error::InvalidParams(format!(
                "p^N = {}^{} does not fit in 62 bits",
                self.p, self.precision
            ))),
        }
    }

    /// q = |p|^{-1}; the field is Q_p throughout.
    pub fn q(&self) -> u64 {
        self.p
    }

    /// p^N, the modulus for integral residues.
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.precision)
    }

    pub fn pow(&self, k: u32) -> u64 {
        self.p.pow(k)
    }

    /// Cyclotomic field housing every value of psi that occurs at level m.
    pub fn cyclo_field(&self) -> CycloField {
        CycloField::new(self.p, self.m)
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn checked_pow(p: u64, k: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..k {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub(crate) fn vp_u64(mut x: u64, p: u64) -> Option<u32> {
    if x == 0 {
        return None;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Some(v)
}

/// v_p(k!) by Legendre's formula.
pub(crate) fn vp_factorial(k: u64, p: u64) -> u32 {
    let mut v = 0u64;
    let mut pk = p;
    while pk <= k {
        v += k / pk;
        match pk.checked_mul(p) {
            Some(x) => pk = x,
            None => break,
        }
    }
    v as u32
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Reduces a signed integer into `[0, m)`.
#[inline]
pub(crate) fn reduce_i128(x: i128, m: u64) -> u64 {
    x.rem_euclid(m as i128) as u64
}
