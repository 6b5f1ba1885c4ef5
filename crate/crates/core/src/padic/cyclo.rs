use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::TruncatedScalar;
use crate::error::{Error, Result};

/// The cyclotomic field Q(zeta) with zeta a primitive p^k-th root of unity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CycloField {
    pub p: u64,
    pub k: u32,
}

impl CycloField {
    pub fn new(p: u64, k: u32) -> Self {
        CycloField { p, k }
    }

    /// p^k, the order of zeta.
    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.k)
    }

    /// Degree of the field, phi(p^k).
    pub fn degree(&self) -> usize {
        if self.k == 0 {
            1
        } else {
            (self.p as usize - 1) * (self.p as usize).pow(self.k - 1)
        }
    }

    /// Reduces a coefficient vector indexed by powers of zeta (any length) to
    /// the power basis `1, zeta, ..., zeta^{phi-1}`.
    ///
    /// Uses `zeta^{p^k} = 1` and
    /// `zeta^{(p-1)p^{k-1} + j} = -sum_{i<p-1} zeta^{i p^{k-1} + j}`.
    pub(crate) fn reduce_in_place<T>(&self, wide: &mut [T]) -> usize
    where
        T: Copy + std::ops::AddAssign + std::ops::SubAssign,
    {
        let order = self.order();
        let phi = self.degree();
        debug_assert!(wide.len() >= order);
        for t in order..wide.len() {
            let c = wide[t];
            wide[t % order] += c;
        }
        if self.k == 0 {
            return 1;
        }
        let block = order / self.p as usize;
        for t in phi..order {
            let c = wide[t];
            let j = t - phi;
            for i in 0..(self.p as usize - 1) {
                wide[i * block + j] -= c;
            }
        }
        phi
    }

    /// Embedding factor into a larger field of the same characteristic
    /// prime: zeta_{p^k} = zeta_{p^K}^{p^{K-k}}.
    fn embed_factor(&self, into: &CycloField) -> usize {
        assert_eq!(self.p, into.p, "cyclotomic fields over different primes");
        assert!(self.k <= into.k);
        (self.p as usize).pow(into.k - self.k)
    }
}

/// An exact element of Q(zeta_{p^k}): `sum coeffs[i] zeta^i / den`.
///
/// Always canonical: coefficients in the power basis of length phi(p^k),
/// `den > 0`, and `gcd(coeffs, den) = 1`. Structural equality is equality
/// in the field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycloRational {
    field: CycloField,
    coeffs: Vec<BigInt>,
    den: BigInt,
}

impl CycloRational {
    pub fn zero(field: CycloField) -> Self {
        CycloRational { field, coeffs: vec![BigInt::zero(); field.degree()], den: BigInt::one() }
    }

    pub fn one(field: CycloField) -> Self {
        Self::from_integer(field, 1)
    }

    pub fn from_integer(field: CycloField, x: i64) -> Self {
        let mut coeffs = vec![BigInt::zero(); field.degree()];
        coeffs[0] = BigInt::from(x);
        Self::from_raw(field, coeffs, BigInt::one())
    }

    pub fn from_rational(field: CycloField, num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let mut coeffs = vec![BigInt::zero(); field.degree()];
        coeffs[0] = BigInt::from(num);
        Self::from_raw(field, coeffs, BigInt::from(den))
    }

    /// zeta^t.
    pub fn zeta_pow(field: CycloField, t: i64) -> Self {
        let order = field.order() as i64;
        let mut wide = vec![BigInt::zero(); field.order()];
        wide[t.rem_euclid(order) as usize] = BigInt::one();
        Self::from_raw(field, wide, BigInt::one())
    }

    /// Canonicalizes an arbitrary coefficient vector over powers of zeta.
    pub fn from_raw(field: CycloField, coeffs: Vec<BigInt>, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let order = field.order();
        let mut wide = coeffs;
        if wide.len() < order {
            wide.resize(order, BigInt::zero());
        }
        // BigInt is not Copy; reduce by hand with the same recurrences.
        for t in order..wide.len() {
            let c = std::mem::take(&mut wide[t]);
            wide[t % order] += c;
        }
        wide.truncate(order);
        let phi = field.degree();
        if field.k > 0 {
            let block = order / field.p as usize;
            for t in phi..order {
                let c = std::mem::take(&mut wide[t]);
                let j = t - phi;
                for i in 0..(field.p as usize - 1) {
                    wide[i * block + j] -= &c;
                }
            }
        }
        wide.truncate(phi);
        let mut out = CycloRational { field, coeffs: wide, den };
        out.normalize();
        out
    }

    pub(crate) fn from_small(field: CycloField, coeffs: &[i128], den: i128) -> Self {
        let mut c: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
        c.resize(field.degree().max(c.len()), BigInt::zero());
        Self::from_raw(field, c, BigInt::from(den))
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for c in &mut self.coeffs {
                *c = -c.clone();
            }
        }
        if self.coeffs.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                return;
            }
        }
        self.den /= &g;
        for c in &mut self.coeffs {
            *c /= &g;
        }
    }

    pub fn field(&self) -> CycloField {
        self.field
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The image of `self` in the larger field `into`.
    pub fn embed(&self, into: CycloField) -> Self {
        if into == self.field {
            return self.clone();
        }
        let f = self.field.embed_factor(&into);
        let mut wide = vec![BigInt::zero(); into.order()];
        for (i, c) in self.coeffs.iter().enumerate() {
            wide[i * f] = c.clone();
        }
        Self::from_raw(into, wide, self.den.clone())
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.field == b.field {
            return (a.clone(), b.clone());
        }
        if a.field.k < b.field.k {
            (a.embed(b.field), b.clone())
        } else {
            (a.clone(), b.embed(a.field))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.field != other.field {
            let (a, b) = Self::common(self, other);
            return a.add(&b);
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x * &other.den + y * &self.den)
            .collect();
        let mut out = CycloRational { field: self.field, coeffs, den: &self.den * &other.den };
        out.normalize();
        out
    }

    pub fn neg(&self) -> Self {
        CycloRational {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.field != other.field {
            let (a, b) = Self::common(self, other);
            return a.mul(&b);
        }
        let phi = self.field.degree();
        let mut wide = vec![BigInt::zero(); 2 * phi];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    wide[i + j] += x * y;
                }
            }
        }
        Self::from_raw(self.field, wide, &self.den * &other.den)
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * r.numer()).collect();
        Self::from_raw(self.field, coeffs, &self.den * r.denom())
    }

    pub fn to_json(&self) -> Value {
        let mut coeffs: Vec<Value> = self.coeffs.iter().map(big_to_json).collect();
        coeffs.resize(self.field.order(), json!(0));
        json!({"coeffs": coeffs, "den": big_to_json(&self.den)})
    }

    pub fn from_json(field: CycloField, value: &Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| Error::Parse("cyclotomic value must be an object".into()))?;
        let coeffs = obj
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"coeffs\" array".into()))?;
        if coeffs.len() > field.order() {
            return Err(Error::Parse(format!(
                "{} coefficients exceed the cyclotomic order {}",
                coeffs.len(),
                field.order()
            )));
        }
        let coeffs = coeffs.iter().map(json_to_big).collect::<Result<Vec<_>>>()?;
        let den = json_to_big(obj.get("den").ok_or_else(|| Error::Parse("missing \"den\"".into()))?)?;
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Self::from_raw(field, coeffs, den))
    }
}

fn big_to_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn json_to_big(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("non-integer coefficient {n}"))),
        Value::String(s) => s.parse().map_err(|_| Error::Parse(format!("bad integer {s:?}"))),
        other => Err(Error::Parse(format!("expected integer, got {other}"))),
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&CycloRational> for &CycloRational {
            type Output = CycloRational;
            fn $method(self, rhs: &CycloRational) -> CycloRational {
                CycloRational::$method(self, rhs)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &CycloRational {
    type Output = CycloRational;
    fn neg(self) -> CycloRational {
        CycloRational::neg(self)
    }
}

impl fmt::Display for CycloRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{i}")?,
            }
        }
        write!(f, ")/{}", self.den)
    }
}

/// The additive character `psi(a / p^k) = zeta_{p^k}^a`, trivial on Z_p,
/// with values in Q(zeta_{p^K}).
pub fn psi_of(x: &TruncatedScalar, field: CycloField) -> Result<CycloRational> {
    assert_eq!(x.p(), field.p, "psi over a different prime");
    let (depth, a) = x.fractional_numerator();
    if depth == 0 {
        return Ok(CycloRational::one(field));
    }
    if depth > field.k {
        return Err(Error::DenominatorTooDeep { depth, max: field.k });
    }
    let f = (field.p as i64).pow(field.k - depth);
    let order = field.order() as u64;
    let t = ((a % order) as i64 * f).rem_euclid(order as i64);
    Ok(CycloRational::zeta_pow(field, t))
}
