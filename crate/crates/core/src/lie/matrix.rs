use std::fmt;

use super::super::padic::{inv_mod, mul_mod, reduce_i128, vp_u64};
use crate::error::{Error, Result};

/// A square matrix over `Z / modulus`, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModMat {
    n: usize,
    modulus: u64,
    data: Vec<u64>,
}

impl ModMat {
    pub fn zero(n: usize, modulus: u64) -> Self {
        ModMat { n, modulus, data: vec![0; n * n] }
    }

    pub fn identity(n: usize, modulus: u64) -> Self {
        let mut m = Self::zero(n, modulus);
        for i in 0..n {
            m.data[i * n + i] = 1 % modulus;
        }
        m
    }

    pub fn from_vec(n: usize, modulus: u64, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), n * n, "matrix data has the wrong length");
        let data = data.into_iter().map(|x| x % modulus).collect();
        ModMat { n, modulus, data }
    }

    pub fn from_i64(n: usize, modulus: u64, data: &[i64]) -> Self {
        assert_eq!(data.len(), n * n, "matrix data has the wrong length");
        let data = data.iter().map(|&x| reduce_i128(x as i128, modulus)).collect();
        ModMat { n, modulus, data }
    }

    pub fn from_fn(n: usize, modulus: u64, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j) % modulus);
            }
        }
        ModMat { n, modulus, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.n + j] = v % self.modulus;
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.n).map(<[u64]>::to_vec).collect()
    }

    fn check(&self, other: &Self) {
        assert!(self.n == other.n && self.modulus == other.modulus, "matrix shape or modulus mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let m = self.modulus;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| ((a as u128 + b as u128) % m as u128) as u64).collect();
        ModMat { n: self.n, modulus: m, data }
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus;
        ModMat { n: self.n, modulus: m, data: self.data.iter().map(|&a| (m - a) % m).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> Self {
        let m = self.modulus;
        let c = c % m;
        ModMat { n: self.n, modulus: m, data: self.data.iter().map(|&a| mul_mod(a, c, m)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let n = self.n;
        let m = self.modulus as u128;
        let mut data = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u128;
                for l in 0..n {
                    acc = (acc + self.data[i * n + l] as u128 * other.data[l * n + j] as u128) % m;
                }
                data[i * n + j] = acc as u64;
            }
        }
        ModMat { n, modulus: self.modulus, data }
    }

    pub fn trace(&self) -> u64 {
        let m = self.modulus as u128;
        ((0..self.n).map(|i| self.data[i * self.n + i] as u128).sum::<u128>() % m) as u64
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Least p-adic valuation among the entries, `None` for the zero matrix.
    pub fn min_valuation(&self, p: u64) -> Option<u32> {
        self.data.iter().filter_map(|&x| vp_u64(x, p)).min()
    }

    /// True when every entry is divisible by `d`.
    pub fn divisible_by(&self, d: u64) -> bool {
        self.data.iter().all(|&x| x % d == 0)
    }

    /// Entrywise exact division by `d`; entries must be divisible.
    pub fn div_exact(&self, d: u64) -> Self {
        debug_assert!(self.divisible_by(d));
        ModMat { n: self.n, modulus: self.modulus, data: self.data.iter().map(|&x| x / d).collect() }
    }

    /// The same residues read modulo a divisor of the current modulus, or
    /// lifted into a multiple of it (entries keep their representatives).
    pub fn with_modulus(&self, modulus: u64) -> Self {
        ModMat { n: self.n, modulus, data: self.data.iter().map(|&x| x % modulus).collect() }
    }

    /// Inverse modulo a prime power; fails if the reduction mod p is singular.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let m = self.modulus;
        let mut a = self.clone();
        let mut inv = Self::identity(n, m);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| inv_mod(a.get(r, col), m).is_some())
                .ok_or(Error::NotInvertibleAtPrecision)?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let s = inv_mod(a.get(col, col), m).unwrap();
            for j in 0..n {
                a.data[col * n + j] = mul_mod(a.data[col * n + j], s, m);
                inv.data[col * n + j] = mul_mod(inv.data[col * n + j], s, m);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col);
                if f == 0 {
                    continue;
                }
                for j in 0..n {
                    let t = mul_mod(f, a.data[col * n + j], m);
                    a.data[r * n + j] = (a.data[r * n + j] + m - t) % m;
                    let t = mul_mod(f, inv.data[col * n + j], m);
                    inv.data[r * n + j] = (inv.data[r * n + j] + m - t) % m;
                }
            }
        }
        Ok(inv)
    }
}

impl fmt::Debug for ModMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} (mod {})", self.rows(), self.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_mod_prime_power() {
        let a = ModMat::from_i64(2, 27, &[4, 3, 6, 1]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), ModMat::identity(2, 27));
        let sing = ModMat::from_i64(2, 27, &[3, 6, 9, 3]);
        assert_eq!(sing.inverse(), Err(Error::NotInvertibleAtPrecision));
    }

    #[test]
    fn needs_row_swap() {
        let a = ModMat::from_i64(2, 9, &[3, 1, 1, 0]);
        let inv = a.inverse().unwrap();
        assert_eq!(inv.mul(&a), ModMat::identity(2, 9));
    }

    #[test]
    fn trace_and_valuation() {
        let a = ModMat::from_i64(2, 81, &[9, 3, 27, -9]);
        assert_eq!(a.trace(), 0);
        assert_eq!(a.min_valuation(3), Some(1));
        assert_eq!(ModMat::zero(2, 81).min_valuation(3), None);
    }
}
