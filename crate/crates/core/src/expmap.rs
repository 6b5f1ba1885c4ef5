//! Truncated exponential and logarithm between `L` and `K_0 = exp(L)`.
//!
//! For `x = p^e X` the k-th series term is `X^k * p^{ek - v_p(k!)} / u_k`
//! with `u_k` the prime-to-p part of `k!`. The exponent `ek - v_p(k!)` is
//! at least `e` for every `k >= 1`, so all coefficients are p-integral and
//! the series is summed exactly modulo `p^N`.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lie::{LieElement, ModMat};
use crate::padic::{inv_mod, vp_factorial, vp_u64, SessionParams};

/// A matrix of `K_0`: residues mod `p^N`, congruent to the identity mod `p^e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    level: u32,
    mat: ModMat,
}

impl GroupElement {
    pub fn new(sp: &SessionParams, mat: ModMat) -> Result<Self> {
        if mat.n() != sp.n || mat.modulus() != sp.modulus() {
            return Err(Error::InvalidParams("matrix does not match the session".into()));
        }
        let diff = mat.sub(&ModMat::identity(sp.n, sp.modulus()));
        let level = match diff.min_valuation(sp.p) {
            None => sp.precision - sp.e,
            Some(v) if v >= sp.e => v - sp.e,
            Some(_) => return Err(Error::NotInLattice(format!("matrix is not congruent to 1 mod p^{}", sp.e))),
        };
        Ok(GroupElement { level, mat })
    }

    pub fn identity(sp: &SessionParams) -> Self {
        GroupElement { level: sp.precision - sp.e, mat: ModMat::identity(sp.n, sp.modulus()) }
    }

    /// `1 + p^{e + level} * coords`.
    pub fn from_coords(sp: &SessionParams, level: u32, coords: &ModMat) -> Result<Self> {
        let x = coords.with_modulus(sp.modulus()).scale(sp.pow(sp.e + level));
        Self::new(sp, ModMat::identity(sp.n, sp.modulus()).add(&x))
    }

    /// The deepest `a` with the element in `K_a`.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn matrix(&self) -> &ModMat {
        &self.mat
    }

    pub fn in_level(&self, sp: &SessionParams, k: u32) -> bool {
        self.level >= k || sp.e + k >= sp.precision
    }

    pub fn mul(&self, sp: &SessionParams, other: &Self) -> Self {
        Self::new(sp, self.mat.mul(&other.mat)).expect("K_0 is closed under products")
    }

    pub fn inverse(&self, sp: &SessionParams) -> Self {
        let inv = self.mat.inverse().expect("elements of K_0 are invertible");
        Self::new(sp, inv).expect("K_0 is closed under inverses")
    }

    pub fn to_json(&self) -> Value {
        json!({"level": self.level, "mat": self.mat.rows()})
    }
}

/// Least `T` such that every term of index `k > T` vanishes mod `p^N`,
/// using `v(x^k / k!) >= ke - floor((k - 1) / (p - 1))`.
pub fn truncation_bound(sp: &SessionParams) -> u64 {
    let bound = |k: u64| k * sp.e as u64 - (k - 1) / (sp.p - 1);
    let n = sp.precision as u64;
    let mut t = 1;
    // the lower bound is nondecreasing in k, so the first hit suffices
    while bound(t + 1) < n {
        t += 1;
    }
    t
}

fn coords_of(sp: &SessionParams, mat: &ModMat) -> ModMat {
    mat.div_exact(sp.pow(sp.e))
}

/// `Sum_{k=0}^{T} x^k / k!` modulo `p^N`.
pub fn exp_trunc(sp: &SessionParams, x: &LieElement) -> Result<GroupElement> {
    let modulus = sp.modulus();
    let t = truncation_bound(sp);
    let xc = coords_of(sp, x.matrix());
    let mut acc = ModMat::identity(sp.n, modulus);
    let mut pw = ModMat::identity(sp.n, modulus);
    let mut unit = 1u64;
    for k in 1..=t {
        pw = pw.mul(&xc);
        let mut kk = k;
        while kk % sp.p == 0 {
            kk /= sp.p;
        }
        unit = ((unit as u128 * (kk % modulus) as u128) % modulus as u128) as u64;
        let shift = k * sp.e as u64 - vp_factorial(k, sp.p) as u64;
        if shift >= sp.precision as u64 {
            continue;
        }
        let inv = inv_mod(unit, modulus).ok_or(Error::NotInvertibleAtPrecision)?;
        let coeff = ((sp.pow(shift as u32) as u128 * inv as u128) % modulus as u128) as u64;
        acc = acc.add(&pw.scale(coeff));
    }
    GroupElement::new(sp, acc)
}

/// `Sum_{k=1}^{T} (-1)^{k-1} (g - 1)^k / k` modulo `p^N`.
pub fn log_trunc(sp: &SessionParams, g: &GroupElement) -> Result<LieElement> {
    let modulus = sp.modulus();
    let t = truncation_bound(sp);
    let y = g.matrix().sub(&ModMat::identity(sp.n, modulus));
    let yc = coords_of(sp, &y);
    let mut acc = ModMat::zero(sp.n, modulus);
    let mut pw = ModMat::identity(sp.n, modulus);
    for k in 1..=t {
        pw = pw.mul(&yc);
        let v = vp_u64(k, sp.p).unwrap_or(0);
        let shift = k * sp.e as u64 - v as u64;
        if shift >= sp.precision as u64 {
            continue;
        }
        let u = k / sp.pow(v);
        let inv = inv_mod(u % modulus, modulus).ok_or(Error::NotInvertibleAtPrecision)?;
        let mut coeff = ((sp.pow(shift as u32) as u128 * inv as u128) % modulus as u128) as u64;
        if k % 2 == 0 {
            coeff = (modulus - coeff) % modulus;
        }
        acc = acc.add(&pw.scale(coeff));
    }
    LieElement::new(sp, acc)
}

/// `log(exp(x) exp(y)) - x - y`.
pub fn bch_defect(sp: &SessionParams, x: &LieElement, y: &LieElement) -> Result<LieElement> {
    let g = exp_trunc(sp, x)?.mul(sp, &exp_trunc(sp, y)?);
    let z = log_trunc(sp, &g)?;
    LieElement::new(sp, z.matrix().sub(x.matrix()).sub(y.matrix()))
}

/// Outcome of comparing `exp(x + L_k)` with `exp(x) K_k` modulo `K_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpCosetWitness {
    pub level: u32,
    pub size: usize,
    pub equal: bool,
}

/// Compares the two cosets as subsets of `K_0 / K_m`, where `K_m` is the
/// session level; `gK_m` is recorded as `g mod p^{e+m}`.
pub fn exp_coset(sp: &SessionParams, x: &LieElement, k: u32) -> Result<ExpCosetWitness> {
    if k > sp.m {
        return Err(Error::LevelMismatch(format!("coset level {k} exceeds quotient level {}", sp.m)));
    }
    let depth = sp.e + sp.m;
    let reduce = |g: &ModMat| g.with_modulus(sp.pow(depth)).data().to_vec();
    let width = (sp.n * sp.n) as u32;
    let count = sp.pow(width * (sp.m - k)) as usize;
    let digits = ModMat::zero(sp.n, sp.pow(sp.m - k));
    let base = exp_trunc(sp, x)?;
    let mut lhs = BTreeSet::new();
    let mut rhs = BTreeSet::new();
    for idx in 0..count {
        let w = unrank(&digits, idx as u64);
        let z = LieElement::from_coords(sp, k, &w)?;
        lhs.insert(reduce(exp_trunc(sp, &x.add(&z))?.matrix()));
        let h = GroupElement::from_coords(sp, k, &w)?;
        rhs.insert(reduce(base.mul(sp, &h).matrix()));
    }
    Ok(ExpCosetWitness { level: k, size: lhs.len(), equal: lhs == rhs && lhs.len() == count })
}

/// The matrix whose row-major entries are the base-`modulus` digits of `idx`
/// (most significant first).
pub(crate) fn unrank(shape: &ModMat, mut idx: u64) -> ModMat {
    let n = shape.n();
    let b = shape.modulus();
    let mut data = vec![0u64; n * n];
    for slot in data.iter_mut().rev() {
        *slot = idx % b;
        idx /= b;
    }
    ModMat::from_vec(n, b, data)
}
