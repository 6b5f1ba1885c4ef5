//! Finite quotients at level m and exact measures on them.
//!
//! All three sides are indexed by `X in (Z/p^m)^{n^2}`:
//!
//! * group: `K_0/K_m`, `g = 1 + p^e X`
//! * lie: `L/L_m`, `x = p^e X`
//! * dual: `p^{-m} L^perp / L^perp`, `y = p^{-m-e} X`
//!
//! An index is the big-endian base-`p^m` number formed by the entries of `X`
//! in row-major order.

mod checks;
mod kernels;
mod measure;

pub use checks::{
    big_ball_vanishing_check, check_adjoint_constraint, check_fouexp, class_function, fouexp_base_case,
    image_equivariance, is_coadjoint_stable, projector_family_check, random_measure, spectrum, AdjointReport,
    BigBallReport, FouExpReport, ProjectorReport,
};
pub use kernels::{convolve, exp_pullback, fourier, fourier_companion, project, translate, Projector};
pub use measure::Measure;

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expmap::{exp_trunc, log_trunc, GroupElement};
use crate::lie::{DualElement, LieElement, ModMat};
use crate::padic::{CycloField, SessionParams};

/// Largest quotient for which a context is built.
pub const MAX_QUOTIENT: usize = 1 << 20;
/// Largest quotient for which the full multiplication table is cached.
pub const MAX_MUL_TABLE: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Group,
    Lie,
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuotientDescriptor {
    pub p: u64,
    pub n: usize,
    pub e: u32,
    pub m: u32,
    pub side: Side,
}

/// Index tables for one session at its level `m`.
pub struct QuotientContext {
    sp: SessionParams,
    base: u64,
    dim: usize,
    size: usize,
    exp_idx: Vec<u32>,
    log_idx: Vec<u32>,
    inv_idx: Vec<u32>,
    mul: OnceLock<Vec<u16>>,
}

impl std::fmt::Debug for QuotientContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuotientContext").field("sp", &self.sp).field("size", &self.size).finish()
    }
}

impl QuotientContext {
    pub fn new(sp: SessionParams) -> Result<Self> {
        sp.validate()?;
        let dim = sp.n * sp.n;
        let base = sp.pow(sp.m);
        let size = (base as u128).checked_pow(dim as u32).filter(|&s| s <= MAX_QUOTIENT as u128);
        let Some(size) = size else {
            return Err(Error::QuotientTooLarge((base as u128).saturating_pow(dim as u32).min(u64::MAX as u128) as u64));
        };
        let size = size as usize;
        let mut ctx = QuotientContext {
            sp,
            base,
            dim,
            size,
            exp_idx: Vec::new(),
            log_idx: Vec::new(),
            inv_idx: Vec::new(),
            mul: OnceLock::new(),
        };
        ctx.exp_idx = (0..size)
            .into_par_iter()
            .map(|i| exp_trunc(&sp, &ctx.lie_element(i)).map(|g| ctx.group_index(&g) as u32))
            .collect::<Result<_>>()?;
        ctx.log_idx = (0..size)
            .into_par_iter()
            .map(|i| log_trunc(&sp, &ctx.group_element(i)).map(|x| ctx.lie_index(&x) as u32))
            .collect::<Result<_>>()?;
        let depth = sp.pow(sp.e + sp.m);
        ctx.inv_idx = (0..size)
            .into_par_iter()
            .map(|i| {
                let g = ctx.group_element(i).matrix().with_modulus(depth);
                g.inverse().map(|h| ctx.index_of_group_matrix(&h) as u32)
            })
            .collect::<Result<_>>()?;
        Ok(ctx)
    }

    pub fn session(&self) -> &SessionParams {
        &self.sp
    }

    pub fn level(&self) -> u32 {
        self.sp.m
    }

    /// `p^m`, the base of index digits.
    pub fn base(&self) -> u64 {
        self.base
    }

    /// Number of matrix entries, `n^2`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `|Q| = p^{n^2 m}`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn field(&self) -> CycloField {
        self.sp.cyclo_field()
    }

    pub fn descriptor(&self, side: Side) -> QuotientDescriptor {
        QuotientDescriptor { p: self.sp.p, n: self.sp.n, e: self.sp.e, m: self.sp.m, side }
    }

    pub fn coords(&self, mut idx: usize) -> Vec<u64> {
        let mut out = vec![0u64; self.dim];
        for slot in out.iter_mut().rev() {
            *slot = idx as u64 % self.base;
            idx /= self.base as usize;
        }
        out
    }

    pub fn index(&self, coords: &[u64]) -> usize {
        coords.iter().fold(0usize, |acc, &c| acc * self.base as usize + (c % self.base) as usize)
    }

    fn index_of_group_matrix(&self, g: &ModMat) -> usize {
        let n = self.sp.n;
        let pe = self.sp.pow(self.sp.e);
        let mut coords = Vec::with_capacity(self.dim);
        for i in 0..n {
            for j in 0..n {
                let v = g.get(i, j);
                let v = if i == j { (v + g.modulus() - 1) % g.modulus() } else { v };
                debug_assert_eq!(v % pe, 0);
                coords.push((v / pe) % self.base);
            }
        }
        self.index(&coords)
    }

    pub fn group_index(&self, g: &GroupElement) -> usize {
        self.index_of_group_matrix(g.matrix())
    }

    pub fn group_element(&self, idx: usize) -> GroupElement {
        let c = ModMat::from_vec(self.sp.n, self.sp.modulus(), self.coords(idx));
        GroupElement::from_coords(&self.sp, 0, &c).expect("coordinates give an element of K_0")
    }

    pub fn lie_index(&self, x: &LieElement) -> usize {
        let pe = self.sp.pow(self.sp.e);
        let coords: Vec<u64> = x.matrix().data().iter().map(|&v| (v / pe) % self.base).collect();
        self.index(&coords)
    }

    pub fn lie_element(&self, idx: usize) -> LieElement {
        let c = ModMat::from_vec(self.sp.n, self.sp.modulus(), self.coords(idx));
        LieElement::from_coords(&self.sp, 0, &c).expect("coordinates give an element of L")
    }

    /// Class of `y` in `p^{-m} L^perp / L^perp`.
    pub fn dual_index(&self, y: &DualElement) -> Result<usize> {
        let m = self.sp.m;
        if y.k() > m {
            return Err(Error::LevelMismatch(format!("dual element of depth {} lies outside p^-{m} L^perp", y.k())));
        }
        let scaled = y.scaled_to(&self.sp, m);
        let coords: Vec<u64> = scaled.data().iter().map(|&v| v % self.base).collect();
        Ok(self.index(&coords))
    }

    pub fn dual_element(&self, idx: usize) -> DualElement {
        DualElement::new(&self.sp, self.sp.m, ModMat::from_vec(self.sp.n, self.sp.modulus(), self.coords(idx)))
    }

    /// Lie index of `exp^{-1}` of a group index.
    pub fn log_of(&self, g: usize) -> usize {
        self.log_idx[g] as usize
    }

    /// Group index of `exp` of a lie index.
    pub fn exp_of(&self, x: usize) -> usize {
        self.exp_idx[x] as usize
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv_idx[g] as usize
    }

    /// Group product on indices: `X + Y + p^e X Y`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        if let Some(t) = self.mul.get() {
            return t[a * self.size + b] as usize;
        }
        self.mul_direct(a, b)
    }

    fn mul_direct(&self, a: usize, b: usize) -> usize {
        let n = self.sp.n;
        let x = self.coords(a);
        let y = self.coords(b);
        let base = self.base as u128;
        let pe = (self.sp.pow(self.sp.e) as u128) % base;
        let mut out = vec![0u64; self.dim];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u128;
                for l in 0..n {
                    acc += x[i * n + l] as u128 * y[l * n + j] as u128;
                }
                let v = (x[i * n + j] as u128 + y[i * n + j] as u128 + pe * (acc % base)) % base;
                out[i * n + j] = v as u64;
            }
        }
        self.index(&out)
    }

    /// The cached multiplication table, built on first use when small enough.
    pub fn mul_table(&self) -> Option<&[u16]> {
        if self.size > MAX_MUL_TABLE {
            return None;
        }
        Some(self.mul.get_or_init(|| {
            let size = self.size;
            let n = self.sp.n;
            let base = self.base as usize;
            let cols = base.pow(n as u32);
            // column codes of every right factor
            let codes: Vec<usize> = (0..size)
                .flat_map(|b| {
                    let y = self.coords(b);
                    (0..n).map(move |j| (0..n).fold(0, |acc, i| acc * base + y[i * n + j] as usize))
                })
                .collect();
            let weight: Vec<usize> = (0..self.dim).map(|d| base.pow((self.dim - 1 - d) as u32)).collect();
            let pe = self.sp.pow(self.sp.e) as usize % base;
            let rows: Vec<Vec<u16>> = (0..size)
                .into_par_iter()
                .map(|a| {
                    let x = self.coords(a);
                    // X + (I + p^e X) v for each column position j and column value v
                    let tables: Vec<Vec<usize>> = (0..n)
                        .map(|j| {
                            (0..cols)
                                .map(|code| {
                                    let mut v = vec![0usize; n];
                                    let mut c = code;
                                    for slot in v.iter_mut().rev() {
                                        *slot = c % base;
                                        c /= base;
                                    }
                                    (0..n)
                                        .map(|i| {
                                            let xv: usize = (0..n).map(|l| x[i * n + l] as usize * v[l]).sum();
                                            let d = (x[i * n + j] as usize + v[i] + pe * (xv % base)) % base;
                                            d * weight[i * n + j]
                                        })
                                        .sum()
                                })
                                .collect()
                        })
                        .collect();
                    codes
                        .chunks_exact(n)
                        .map(|cs| cs.iter().zip(&tables).map(|(&c, t)| t[c]).sum::<usize>() as u16)
                        .collect()
                })
                .collect();
            rows.concat()
        }))
    }

    /// Sum on the lie and dual sides (digitwise mod `p^m`).
    pub fn add(&self, a: usize, b: usize) -> usize {
        let base = self.base as usize;
        let (mut a, mut b) = (a, b);
        let mut out = 0usize;
        let mut scale = 1usize;
        for _ in 0..self.dim {
            out += ((a % base + b % base) % base) * scale;
            a /= base;
            b /= base;
            scale *= base;
        }
        out
    }

    pub fn neg(&self, a: usize) -> usize {
        let coords: Vec<u64> = self.coords(a).iter().map(|&c| (self.base - c) % self.base).collect();
        self.index(&coords)
    }

    /// Indices of `K_r / K_m` (equivalently `L_r / L_m`), increasing.
    pub fn level_members(&self, r: u32) -> Vec<usize> {
        let r = r.min(self.sp.m);
        let step = self.sp.pow(r);
        let count = self.sp.pow(self.sp.m - r).pow(self.dim as u32) as usize;
        let sub = self.sp.pow(self.sp.m - r) as usize;
        (0..count)
            .map(|t| {
                let mut t = t;
                let mut coords = vec![0u64; self.dim];
                for slot in coords.iter_mut().rev() {
                    *slot = (t % sub) as u64 * step;
                    t /= sub;
                }
                self.index(&coords)
            })
            .collect()
    }

    /// Representatives `X mod p^r` of the cosets of `K_r` in `K_0`.
    pub fn coset_reps(&self, r: u32) -> Vec<usize> {
        let r = r.min(self.sp.m);
        let sub = self.sp.pow(r) as usize;
        let count = sub.pow(self.dim as u32);
        (0..count)
            .map(|t| {
                let mut t = t;
                let mut coords = vec![0u64; self.dim];
                for slot in coords.iter_mut().rev() {
                    *slot = (t % sub) as u64;
                    t /= sub;
                }
                self.index(&coords)
            })
            .collect()
    }

    /// Whether an index lies in level `r`.
    pub fn in_level(&self, idx: usize, r: u32) -> bool {
        let step = self.sp.pow(r.min(self.sp.m));
        self.coords(idx).iter().all(|&c| c % step == 0)
    }

    /// Exponents `t` with `eta(exp x) = zeta_{p^m}^t` for `x` in `L_r / L_m`,
    /// where `eta(exp x) = psi(<c, x>)`; listed in the order of
    /// [`level_members`](Self::level_members). Requires `c` in `p^{-m} L^perp`.
    pub fn eta_exponents(&self, center: &DualElement, r: u32) -> Result<Vec<u32>> {
        let k = center.k();
        let m = self.sp.m;
        if k > m {
            return Err(Error::LevelMismatch(format!("character of depth {k} is not defined modulo K_{m}")));
        }
        let n = self.sp.n;
        let base = self.base as u128;
        let scale = self.sp.pow(m - k) as u128;
        let c: Vec<u128> = center.matrix().data().iter().map(|&v| v as u128 % base).collect();
        Ok(self
            .level_members(r)
            .iter()
            .map(|&g| {
                let x = self.coords(self.log_of(g));
                let mut t = 0u128;
                for i in 0..n {
                    for j in 0..n {
                        t += c[i * n + j] * x[j * n + i] as u128 % base;
                    }
                }
                ((t % base) * scale % base) as u32
            })
            .collect())
    }

    /// Base-p digit string of an index: each entry contributes `m` digits,
    /// most significant first.
    pub fn key(&self, idx: usize) -> Result<String> {
        let p = self.sp.p;
        if p > 36 {
            return Err(Error::InvalidParams("element keys need p <= 36".into()));
        }
        let mut s = String::with_capacity(self.dim * self.sp.m as usize);
        for c in self.coords(idx) {
            let mut digits = vec![0u32; self.sp.m as usize];
            let mut v = c;
            for d in digits.iter_mut().rev() {
                *d = (v % p) as u32;
                v /= p;
            }
            for d in digits {
                s.push(std::char::from_digit(d, 36).unwrap());
            }
        }
        Ok(s)
    }

    pub fn parse_key(&self, key: &str) -> Result<usize> {
        let p = self.sp.p;
        let m = self.sp.m as usize;
        let chars: Vec<char> = key.chars().collect();
        if chars.len() != self.dim * m {
            return Err(Error::Parse(format!("key {key:?} should have {} digits", self.dim * m)));
        }
        let mut coords = Vec::with_capacity(self.dim);
        for chunk in chars.chunks(m.max(1)).take(self.dim) {
            let mut v = 0u64;
            for ch in chunk {
                let d = ch.to_digit(36).filter(|&d| (d as u64) < p);
                let d = d.ok_or_else(|| Error::Parse(format!("bad digit {ch:?} in key {key:?}")))?;
                v = v * p + d as u64;
            }
            coords.push(v);
        }
        coords.resize(self.dim, 0);
        Ok(self.index(&coords))
    }
}
