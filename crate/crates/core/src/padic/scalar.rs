use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::Value;

use super::{checked_pow, inv_mod, mul_mod, reduce_i128};
use crate::error::{Error, Result};

/// A p-adic number `p^v * u` carried with `precision` digits of unit.
///
/// `u` is reduced modulo `p^precision` and is prime to p. Any value whose
/// valuation reaches the precision collapses to zero (`v = +inf`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruncatedScalar {
    p: u64,
    precision: u32,
    val: Option<i64>,
    unit: u64,
}

impl TruncatedScalar {
    pub fn zero(p: u64, precision: u32) -> Self {
        TruncatedScalar { p, precision, val: None, unit: 0 }
    }

    pub fn one(p: u64, precision: u32) -> Self {
        Self::from_i64(p, precision, 1)
    }

    /// `p^v * unit`; p-factors of `unit` are absorbed into the valuation.
    pub fn from_parts(p: u64, precision: u32, v: i64, unit: u64) -> Self {
        let modulus = p.pow(precision);
        if unit == 0 {
            return Self::zero(p, precision);
        }
        let mut u = unit;
        let mut v = v;
        while u % p == 0 {
            u /= p;
            v += 1;
        }
        Self::normalized(p, precision, v, (u % modulus) as u128)
    }

    pub fn from_i64(p: u64, precision: u32, x: i64) -> Self {
        if x == 0 {
            return Self::zero(p, precision);
        }
        let mut a = x.unsigned_abs();
        let mut v = 0i64;
        while a % p == 0 {
            a /= p;
            v += 1;
        }
        let modulus = p.pow(precision);
        let u = if x < 0 { reduce_i128(-(a as i128), modulus) } else { a % modulus };
        Self::normalized(p, precision, v, u as u128)
    }

    /// The p-adic expansion of `num / den` (`den != 0`).
    pub fn from_ratio(p: u64, precision: u32, num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        let a = Self::from_i64(p, precision, num);
        let b = Self::from_i64(p, precision, den);
        Ok(a.mul(&b.inv()?))
    }

    fn normalized(p: u64, precision: u32, v: i64, u: u128) -> Self {
        if u == 0 || v >= precision as i64 {
            return Self::zero(p, precision);
        }
        let modulus = p.pow(precision) as u128;
        TruncatedScalar { p, precision, val: Some(v), unit: (u % modulus) as u64 }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `None` encodes `+inf`.
    pub fn valuation(&self) -> Option<i64> {
        self.val
    }

    pub fn unit(&self) -> u64 {
        self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.val.is_none()
    }

    pub fn is_integral(&self) -> bool {
        self.val.map_or(true, |v| v >= 0)
    }

    fn modulus(&self) -> u64 {
        self.p.pow(self.precision)
    }

    fn check_compatible(&self, other: &Self) {
        assert!(
            self.p == other.p && self.precision == other.precision,
            "mixing p-adic scalars from different sessions"
        );
    }

    pub fn neg(&self) -> Self {
        match self.val {
            None => *self,
            Some(v) => {
                let m = self.modulus();
                Self::normalized(self.p, self.precision, v, ((m - self.unit) % m) as u128)
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let (a, b) = match (self.val, other.val) {
            (None, _) => return *other,
            (_, None) => return *self,
            (Some(x), Some(y)) => {
                if x <= y {
                    (self, other)
                } else {
                    (other, self)
                }
            }
        };
        let (va, vb) = (a.val.unwrap(), b.val.unwrap());
        let gap = (vb - va) as u32;
        let mut s = a.unit as u128;
        if gap < self.precision {
            let shift = checked_pow(self.p, gap).unwrap() as u128;
            s += shift * b.unit as u128;
        }
        if s == 0 {
            return Self::zero(self.p, self.precision);
        }
        let mut v = va;
        while s % self.p as u128 == 0 {
            s /= self.p as u128;
            v += 1;
        }
        Self::normalized(self.p, self.precision, v, s)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        match (self.val, other.val) {
            (Some(x), Some(y)) => {
                let u = mul_mod(self.unit, other.unit, self.modulus());
                Self::normalized(self.p, self.precision, x + y, u as u128)
            }
            _ => Self::zero(self.p, self.precision),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        match self.val {
            None => Err(Error::PrecisionExhausted("inverse of a value that is zero to precision".into())),
            Some(v) => {
                let u = inv_mod(self.unit, self.modulus()).expect("unit is prime to p");
                Ok(TruncatedScalar { p: self.p, precision: self.precision, val: Some(-v), unit: u })
            }
        }
    }

    /// Multiplies by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        match self.val {
            None => *self,
            Some(v) => Self::normalized(self.p, self.precision, v + k, self.unit as u128),
        }
    }

    /// For `x = p^v u` with `v < 0`, the integer `a` in `[0, p^{-v})` with
    /// `x = a / p^{-v} mod Z_p`; zero for integral `x`.
    pub fn fractional_numerator(&self) -> (u32, u64) {
        match self.val {
            Some(v) if v < 0 => {
                let k = (-v) as u32;
                match checked_pow(self.p, k) {
                    Some(pk) => (k, self.unit % pk),
                    None => (k, self.unit),
                }
            }
            _ => (0, 0),
        }
    }

    pub fn from_json(p: u64, precision: u32, value: &Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| Error::Parse("scalar must be an object".into()))?;
        let u = obj
            .get("u")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("scalar needs integer field \"u\"".into()))?;
        match obj.get("v") {
            Some(Value::String(s)) if s == "inf" => Ok(Self::zero(p, precision)),
            Some(v) => {
                let v = v.as_i64().ok_or_else(|| Error::Parse("\"v\" must be an integer or \"inf\"".into()))?;
                Ok(Self::from_parts(p, precision, v, u))
            }
            None => Err(Error::Parse("scalar needs field \"v\"".into())),
        }
    }
}

impl Serialize for TruncatedScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("TruncatedScalar", 2)?;
        match self.val {
            None => st.serialize_field("v", "inf")?,
            Some(v) => st.serialize_field("v", &v)?,
        }
        st.serialize_field("u", &self.unit)?;
        st.end()
    }
}

impl fmt::Display for TruncatedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.val {
            None => write!(f, "0"),
            Some(v) => write!(f, "{}^{} * {}", self.p, v, self.unit),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: i64) -> TruncatedScalar {
        TruncatedScalar::from_i64(3, 4, x)
    }

    #[test]
    fn canonical_form() {
        let x = s(18);
        assert_eq!(x.valuation(), Some(2));
        assert_eq!(x.unit(), 2);
        assert!(s(81).is_zero());
        assert_eq!(s(-1).unit(), 80);
    }

    #[test]
    fn ring_ops() {
        assert_eq!(s(5).add(&s(4)), s(9));
        assert_eq!(s(5).sub(&s(5)), s(0));
        assert_eq!(s(6).mul(&s(3)), s(18));
        let third = TruncatedScalar::from_ratio(3, 4, 1, 3).unwrap();
        assert_eq!(third.valuation(), Some(-1));
        assert_eq!(third.mul(&s(3)), s(1));
        let half = TruncatedScalar::from_ratio(3, 4, 1, 2).unwrap();
        assert_eq!(half.add(&half), s(1));
    }

    #[test]
    fn fractional_part() {
        let x = TruncatedScalar::from_ratio(3, 6, 5, 27).unwrap();
        assert_eq!(x.fractional_numerator(), (3, 5));
        let y = TruncatedScalar::from_ratio(3, 6, 1, 2).unwrap();
        assert_eq!(y.fractional_numerator(), (0, 0));
    }

    #[test]
    fn json_shape() {
        let x = TruncatedScalar::from_ratio(3, 4, 1, 27).unwrap();
        let j = serde_json::to_value(x).unwrap();
        assert_eq!(j, serde_json::json!({"v": -3, "u": 1}));
        assert_eq!(TruncatedScalar::from_json(3, 4, &j).unwrap(), x);
        let z = serde_json::to_value(s(0)).unwrap();
        assert_eq!(z, serde_json::json!({"v": "inf", "u": 0}));
    }
}
