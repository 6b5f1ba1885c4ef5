//! The Lie algebra gl_n over Z_p at finite precision: the lattice chain
//! `L_k = p^{e+k} gl_n(Z_p)`, its trace-form duals, the norm on the dual,
//! the coadjoint action and nilpotency of dual cosets.

mod matrix;
mod nilpotent;

pub use matrix::ModMat;
pub use nilpotent::{nilpotent_in_coset, NilpotencyOutcome, NilpotentCertificate, DEFAULT_SEARCH_DEPTH};

use std::cmp::Ordering;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::padic::{SessionParams, TruncatedScalar};

/// An element of `L_level`: the stored matrix holds the actual entries
/// modulo p^N, all divisible by `p^{e + level}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LieElement {
    level: u32,
    mat: ModMat,
}

impl LieElement {
    /// Wraps a matrix of actual entries, inferring the deepest level it lies in.
    pub fn new(sp: &SessionParams, mat: ModMat) -> Result<Self> {
        check_shape(sp, &mat)?;
        let level = match mat.min_valuation(sp.p) {
            None => sp.precision - sp.e,
            Some(v) if v >= sp.e => v - sp.e,
            Some(v) => {
                return Err(Error::NotInLattice(format!(
                    "entry of valuation {v} lies outside L = p^{} gl_n(Z_p)",
                    sp.e
                )))
            }
        };
        Ok(LieElement { level, mat })
    }

    /// Checks membership in `L_level` and records that level.
    pub fn at_level(sp: &SessionParams, level: u32, mat: ModMat) -> Result<Self> {
        let x = Self::new(sp, mat)?;
        if x.level < level {
            return Err(Error::NotInLattice(format!("element lies in L_{} but not in L_{level}", x.level)));
        }
        Ok(LieElement { level, mat: x.mat })
    }

    /// `p^{e + level} * coords`.
    pub fn from_coords(sp: &SessionParams, level: u32, coords: &ModMat) -> Result<Self> {
        let scale = sp.pow(sp.e + level);
        Self::at_level(sp, level, coords.with_modulus(sp.modulus()).scale(scale))
    }

    pub fn zero(sp: &SessionParams) -> Self {
        LieElement { level: sp.precision - sp.e, mat: ModMat::zero(sp.n, sp.modulus()) }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn matrix(&self) -> &ModMat {
        &self.mat
    }

    pub fn entry(&self, sp: &SessionParams, i: usize, j: usize) -> TruncatedScalar {
        TruncatedScalar::from_parts(sp.p, sp.precision, 0, self.mat.get(i, j))
    }

    /// Whether the element lies in `L_k`.
    pub fn in_level(&self, sp: &SessionParams, k: u32) -> bool {
        sp.e + k >= sp.precision || self.mat.divisible_by(sp.pow(sp.e + k))
    }

    pub fn add(&self, other: &Self) -> Self {
        LieElement { level: self.level.min(other.level), mat: self.mat.add(&other.mat) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        LieElement { level: self.level.min(other.level), mat: self.mat.sub(&other.mat) }
    }

    pub fn neg(&self) -> Self {
        LieElement { level: self.level, mat: self.mat.neg() }
    }

    /// `c * x` for an integer scalar `c` (the O-line through x).
    pub fn scale(&self, c: i64) -> Self {
        let m = self.mat.modulus();
        let c = c.rem_euclid(m as i64) as u64;
        LieElement { level: self.level, mat: self.mat.scale(c) }
    }

    pub fn to_json(&self) -> Value {
        json!({"level": self.level, "mat": self.mat.rows()})
    }
}

/// Norm exponent on the dual: `|y| = q^v`, or zero for `y = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Radius {
    Zero,
    Pow(i64),
}

impl Radius {
    /// The exponent v with `max(|y|, 1) = q^v`.
    pub fn clamped_exponent(&self) -> i64 {
        match *self {
            Radius::Zero => 0,
            Radius::Pow(v) => v.max(0),
        }
    }
}

/// An element `p^{-k-e} * mat` of the dual `gl_n(Q_p)*`, identified with
/// gl_n through the trace form; it lies in `p^{-k} L^perp` where
/// `L^perp = p^{-e} gl_n(Z_p)`.
///
/// Canonical form has `mat` nonzero mod p whenever `k > 0`, and `k = 0`
/// for the zero element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualElement {
    k: u32,
    mat: ModMat,
}

impl DualElement {
    pub fn new(sp: &SessionParams, k: u32, mat: ModMat) -> Self {
        let mat = mat.with_modulus(sp.modulus());
        let mut y = DualElement { k, mat };
        y.canonicalize(sp.p);
        y
    }

    pub fn zero(sp: &SessionParams) -> Self {
        DualElement { k: 0, mat: ModMat::zero(sp.n, sp.modulus()) }
    }

    /// Builds `y` from its actual entries.
    pub fn from_scalars(sp: &SessionParams, entries: &[TruncatedScalar]) -> Result<Self> {
        if entries.len() != sp.n * sp.n {
            return Err(Error::Parse(format!("expected {} entries", sp.n * sp.n)));
        }
        let minv = entries.iter().filter_map(TruncatedScalar::valuation).min();
        let Some(minv) = minv else {
            return Ok(Self::zero(sp));
        };
        let shift = (-(minv) - sp.e as i64).max(0);
        let total = shift + sp.e as i64;
        let modulus = sp.modulus() as u128;
        let mut data = Vec::with_capacity(entries.len());
        for s in entries {
            let x = match s.valuation() {
                None => 0,
                Some(v) => {
                    let e = v + total;
                    debug_assert!(e >= 0);
                    if e >= sp.precision as i64 {
                        0
                    } else {
                        (sp.pow(e as u32) as u128 * s.unit() as u128 % modulus) as u64
                    }
                }
            };
            data.push(x);
        }
        Ok(Self::new(sp, shift as u32, ModMat::from_vec(sp.n, sp.modulus(), data)))
    }

    fn canonicalize(&mut self, p: u64) {
        if self.mat.is_zero() {
            self.k = 0;
            return;
        }
        while self.k > 0 && self.mat.divisible_by(p) {
            self.mat = self.mat.div_exact(p);
            self.k -= 1;
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn matrix(&self) -> &ModMat {
        &self.mat
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn entry(&self, sp: &SessionParams, i: usize, j: usize) -> TruncatedScalar {
        TruncatedScalar::from_parts(sp.p, sp.precision, -((self.k + sp.e) as i64), self.mat.get(i, j))
    }

    /// The integer matrix `p^{k+e} y` for a chosen `k >= self.k`.
    pub fn scaled_to(&self, sp: &SessionParams, k: u32) -> ModMat {
        assert!(k >= self.k, "cannot scale a dual element to a shallower denominator");
        self.mat.scale(sp.pow(k - self.k))
    }

    pub fn add(&self, sp: &SessionParams, other: &Self) -> Self {
        let k = self.k.max(other.k);
        Self::new(sp, k, self.scaled_to(sp, k).add(&other.scaled_to(sp, k)))
    }

    pub fn neg(&self, sp: &SessionParams) -> Self {
        Self::new(sp, self.k, self.mat.neg())
    }

    pub fn sub(&self, sp: &SessionParams, other: &Self) -> Self {
        self.add(sp, &other.neg(sp))
    }

    /// Multiplication by `p^j`.
    pub fn scale_pow(&self, sp: &SessionParams, j: i64) -> Self {
        if j <= 0 {
            return Self::new(sp, self.k + (-j) as u32, self.mat.clone());
        }
        let j = j as u32;
        if self.k >= j {
            Self::new(sp, self.k - j, self.mat.clone())
        } else {
            Self::new(sp, 0, self.mat.scale(sp.pow(j - self.k)))
        }
    }

    /// `|y| = min{|alpha| : y in alpha L^perp}`; `|0| = 0`.
    pub fn norm(&self, sp: &SessionParams) -> Radius {
        match self.mat.min_valuation(sp.p) {
            None => Radius::Zero,
            Some(v) => Radius::Pow(self.k as i64 - v as i64),
        }
    }

    /// Whether `y` lies in `p^{-j} L^perp`.
    pub fn in_dual_level(&self, sp: &SessionParams, j: u32) -> bool {
        match self.norm(sp) {
            Radius::Zero => true,
            Radius::Pow(v) => v <= j as i64,
        }
    }

    /// `g y g^{-1}` for `g` invertible over Z_p.
    pub fn coadjoint(&self, sp: &SessionParams, g: &ModMat) -> Result<Self> {
        let g = g.with_modulus(sp.modulus());
        let ginv = g.inverse()?;
        Ok(Self::new(sp, self.k, g.mul(&self.mat).mul(&ginv)))
    }

    pub fn to_json(&self) -> Value {
        json!({"k": self.k, "mat": self.mat.rows()})
    }

    pub fn from_json(sp: &SessionParams, value: &Value) -> Result<Self> {
        let k = value
            .get("k")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("dual element needs integer \"k\"".into()))?;
        let rows = value
            .get("mat")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("dual element needs \"mat\"".into()))?;
        let mat = parse_matrix(sp, rows)?;
        Ok(Self::new(sp, k as u32, mat))
    }
}

pub(crate) fn parse_matrix(sp: &SessionParams, rows: &[Value]) -> Result<ModMat> {
    if rows.len() != sp.n {
        return Err(Error::Parse(format!("expected {} rows", sp.n)));
    }
    let mut data = Vec::with_capacity(sp.n * sp.n);
    for row in rows {
        let row = row.as_array().ok_or_else(|| Error::Parse("matrix rows must be arrays".into()))?;
        if row.len() != sp.n {
            return Err(Error::Parse(format!("expected {} columns", sp.n)));
        }
        for x in row {
            data.push(x.as_i64().ok_or_else(|| Error::Parse("matrix entries must be integers".into()))?);
        }
    }
    Ok(ModMat::from_i64(sp.n, sp.modulus(), &data))
}

impl Ord for DualElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.k, self.mat.data()).cmp(&(other.k, other.mat.data()))
    }
}

impl PartialOrd for DualElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DualElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p^-({}+e) * {:?}", self.k, self.mat.rows())
    }
}

fn check_shape(sp: &SessionParams, mat: &ModMat) -> Result<()> {
    if mat.n() != sp.n || mat.modulus() != sp.modulus() {
        return Err(Error::Parse(format!(
            "matrix must be {0}x{0} modulo p^N = {1}",
            sp.n,
            sp.modulus()
        )));
    }
    Ok(())
}

/// `<x, y> = tr(xy)`.
pub fn trace_pairing(sp: &SessionParams, x: &LieElement, y: &DualElement) -> Result<TruncatedScalar> {
    let shift = y.k + sp.e;
    if shift >= sp.precision {
        return Err(Error::PrecisionExhausted(format!(
            "pairing with denominator p^{shift} leaves no digits at precision {}",
            sp.precision
        )));
    }
    let t = x.mat.mul(&y.mat).trace();
    Ok(TruncatedScalar::from_parts(sp.p, sp.precision, -(shift as i64), t))
}

/// A coset `center + p^{-level} L^perp` of a scaled standard dual lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualCoset {
    pub center: DualElement,
    pub level: u32,
}

impl DualCoset {
    pub fn new(center: DualElement, level: u32) -> Self {
        DualCoset { center, level }
    }

    pub fn contains(&self, sp: &SessionParams, y: &DualElement) -> bool {
        y.sub(sp, &self.center).in_dual_level(sp, self.level)
    }

    /// `c1 - c2 in p^{-max(k1, k2)} L^perp`.
    pub fn intersects(&self, sp: &SessionParams, other: &Self) -> bool {
        coset_intersects(sp, &self.center, self.level, &other.center, other.level)
    }

    pub fn coadjoint(&self, sp: &SessionParams, g: &ModMat) -> Result<Self> {
        Ok(DualCoset { center: self.center.coadjoint(sp, g)?, level: self.level })
    }
}

/// Whether `c1 + p^{-k1} L^perp` and `c2 + p^{-k2} L^perp` meet. The
/// lattices are nested, so they meet iff the larger one contains `c1 - c2`.
pub fn coset_intersects(sp: &SessionParams, c1: &DualElement, k1: u32, c2: &DualElement, k2: u32) -> bool {
    c1.sub(sp, c2).in_dual_level(sp, k1.max(k2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl1() -> SessionParams {
        SessionParams::new(3, 1, 1, 2).unwrap()
    }

    #[test]
    fn pairing_gl1() {
        let sp = gl1();
        let x = LieElement::new(&sp, ModMat::from_i64(1, sp.modulus(), &[3])).unwrap();
        let y = DualElement::new(&sp, 1, ModMat::from_i64(1, sp.modulus(), &[1]));
        let third = TruncatedScalar::from_ratio(3, sp.precision, 1, 3).unwrap();
        assert_eq!(trace_pairing(&sp, &x, &y).unwrap(), third);
        let zero = LieElement::zero(&sp);
        assert!(trace_pairing(&sp, &zero, &y).unwrap().is_zero());
    }

    #[test]
    fn lattice_pairs_into_integers() {
        let sp = SessionParams::new(3, 2, 1, 2).unwrap();
        let x = LieElement::new(&sp, ModMat::from_i64(2, sp.modulus(), &[3, 6, -3, 12])).unwrap();
        let y = DualElement::new(&sp, 0, ModMat::from_i64(2, sp.modulus(), &[1, 2, 4, 5]));
        assert!(trace_pairing(&sp, &x, &y).unwrap().is_integral());
    }

    #[test]
    fn norm_examples() {
        let sp = gl1();
        let y = DualElement::new(&sp, 2, ModMat::from_i64(1, sp.modulus(), &[1]));
        assert_eq!(y.norm(&sp), Radius::Pow(2));
        let from_scalar =
            DualElement::from_scalars(&sp, &[TruncatedScalar::from_ratio(3, sp.precision, 1, 27).unwrap()]).unwrap();
        assert_eq!(from_scalar, y);
        let unit = DualElement::new(&sp, 0, ModMat::from_i64(1, sp.modulus(), &[2]));
        assert_eq!(unit.norm(&sp), Radius::Pow(0));
        assert_eq!(DualElement::zero(&sp).norm(&sp), Radius::Zero);
        let small = DualElement::new(&sp, 0, ModMat::from_i64(1, sp.modulus(), &[9]));
        assert_eq!(small.norm(&sp), Radius::Pow(-2));
    }

    #[test]
    fn canonical_dual_form() {
        let sp = gl1();
        let y = DualElement::new(&sp, 3, ModMat::from_i64(1, sp.modulus(), &[9]));
        assert_eq!(y.k(), 1);
        assert_eq!(y.matrix().get(0, 0), 1);
        assert_eq!(y.scale_pow(&sp, -2).k(), 3);
        assert_eq!(y.scale_pow(&sp, 2).matrix().get(0, 0), 3);
    }

    #[test]
    fn coset_examples() {
        let sp = SessionParams::new(3, 2, 1, 2).unwrap();
        let md = sp.modulus();
        let c = DualElement::new(&sp, 2, ModMat::from_i64(2, md, &[1, 0, 2, 1]));
        assert!(coset_intersects(&sp, &c, 1, &c, 1));
        let far = DualElement::new(&sp, 2, ModMat::from_i64(2, md, &[0, 1, 0, 0]));
        assert!(!coset_intersects(&sp, &c, 1, &far, 1));
        let near = c.add(&sp, &DualElement::new(&sp, 2, ModMat::from_i64(2, md, &[3, 3, 0, 0])));
        assert!(coset_intersects(&sp, &c, 1, &near, 2));
        assert!(coset_intersects(&sp, &c, 1, &near, 1));
        assert!(!coset_intersects(&sp, &c, 0, &near, 0));
    }

    #[test]
    fn coadjoint_identity_and_norm() {
        let sp = SessionParams::new(3, 2, 1, 2).unwrap();
        let md = sp.modulus();
        let y = DualElement::new(&sp, 2, ModMat::from_i64(2, md, &[1, 5, 2, 7]));
        assert_eq!(y.coadjoint(&sp, &ModMat::identity(2, md)).unwrap(), y);
        let g = ModMat::from_i64(2, md, &[4, 3, 6, 1]);
        assert_eq!(y.coadjoint(&sp, &g).unwrap().norm(&sp), y.norm(&sp));
    }

    #[test]
    fn lattice_membership() {
        let sp = SessionParams::new(3, 2, 1, 2).unwrap();
        let bad = ModMat::from_i64(2, sp.modulus(), &[1, 0, 0, 0]);
        assert!(LieElement::new(&sp, bad).is_err());
        let x = LieElement::new(&sp, ModMat::from_i64(2, sp.modulus(), &[9, 0, 27, 0])).unwrap();
        assert_eq!(x.level(), 1);
        assert!(x.in_level(&sp, 1));
        assert!(!x.in_level(&sp, 2));
    }
}
