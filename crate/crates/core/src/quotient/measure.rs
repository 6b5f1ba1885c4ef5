use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::{QuotientContext, QuotientDescriptor, Side};
use crate::error::{Error, Result};
use crate::padic::{CycloField, CycloRational};

/// An exact function on a finite quotient with values in `Q(zeta_{p^m})`.
///
/// Stored densely as `nums / den`: `nums` holds `phi(p^m)` power-basis
/// coefficients per element. The representation is canonical (`den > 0`,
/// coefficients and `den` coprime, `den = 1` for the zero measure), so
/// structural equality is equality of measures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    desc: QuotientDescriptor,
    field: CycloField,
    den: i128,
    nums: Vec<i128>,
}

impl Measure {
    pub fn zero(ctx: &QuotientContext, side: Side) -> Self {
        let field = ctx.field();
        Measure { desc: ctx.descriptor(side), field, den: 1, nums: vec![0; ctx.size() * field.degree()] }
    }

    pub fn delta(ctx: &QuotientContext, side: Side, idx: usize) -> Self {
        let mut m = Self::zero(ctx, side);
        let phi = m.phi();
        m.nums[idx * phi] = 1;
        m
    }

    /// Builds a measure from power-basis coefficients and a common denominator.
    pub(crate) fn from_parts(ctx: &QuotientContext, side: Side, nums: Vec<i128>, den: i128) -> Result<Self> {
        let field = ctx.field();
        debug_assert_eq!(nums.len(), ctx.size() * field.degree());
        let mut m = Measure { desc: ctx.descriptor(side), field, den, nums };
        m.canonicalize()?;
        Ok(m)
    }

    /// Builds a measure from coefficients over all powers `zeta^0 .. zeta^{p^m - 1}`
    /// (`order` slots per element).
    pub(crate) fn from_wide(ctx: &QuotientContext, side: Side, mut wide: Vec<i128>, den: i128) -> Result<Self> {
        let field = ctx.field();
        let order = field.order();
        let phi = field.degree();
        debug_assert_eq!(wide.len(), ctx.size() * order);
        let mut nums = Vec::with_capacity(ctx.size() * phi);
        for chunk in wide.chunks_mut(order) {
            field.reduce_in_place(chunk);
            nums.extend_from_slice(&chunk[..phi]);
        }
        Self::from_parts(ctx, side, nums, den)
    }

    /// Builds a measure value by value.
    pub fn from_fn(
        ctx: &QuotientContext,
        side: Side,
        mut f: impl FnMut(usize) -> CycloRational,
    ) -> Result<Self> {
        let field = ctx.field();
        let phi = field.degree();
        let vals: Vec<CycloRational> = (0..ctx.size()).map(|i| f(i).embed(field)).collect();
        let mut den = BigInt::from(1);
        for v in &vals {
            den = den.lcm(v.den());
        }
        let mut nums = Vec::with_capacity(ctx.size() * phi);
        for v in &vals {
            let s = &den / v.den();
            for c in v.coeffs() {
                nums.push((c * &s).to_i128().ok_or(Error::Overflow)?);
            }
        }
        Self::from_parts(ctx, side, nums, den.to_i128().ok_or(Error::Overflow)?)
    }

    fn canonicalize(&mut self) -> Result<()> {
        if self.den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        if self.den < 0 {
            self.den = self.den.checked_neg().ok_or(Error::Overflow)?;
            for x in &mut self.nums {
                *x = x.checked_neg().ok_or(Error::Overflow)?;
            }
        }
        let mut g = self.den;
        for &x in &self.nums {
            if g == 1 {
                break;
            }
            if x != 0 {
                g = g.gcd(&x);
            }
        }
        if self.nums.iter().all(|&x| x == 0) {
            g = self.den;
        }
        if g > 1 {
            self.den /= g;
            for x in &mut self.nums {
                *x /= g;
            }
        }
        Ok(())
    }

    pub fn descriptor(&self) -> QuotientDescriptor {
        self.desc
    }

    pub fn side(&self) -> Side {
        self.desc.side
    }

    pub fn field(&self) -> CycloField {
        self.field
    }

    pub(crate) fn phi(&self) -> usize {
        self.field.degree()
    }

    pub fn len(&self) -> usize {
        self.nums.len() / self.phi()
    }

    pub fn is_empty(&self) -> bool {
        self.nums.is_empty()
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    /// Numerator coefficients at one element (power basis, over `den`).
    pub fn nums_at(&self, idx: usize) -> &[i128] {
        let phi = self.phi();
        &self.nums[idx * phi..(idx + 1) * phi]
    }

    pub(crate) fn nums(&self) -> &[i128] {
        &self.nums
    }

    pub fn value(&self, idx: usize) -> CycloRational {
        CycloRational::from_small(self.field, self.nums_at(idx), self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.nums.iter().all(|&x| x == 0)
    }

    pub fn is_nonzero_at(&self, idx: usize) -> bool {
        self.nums_at(idx).iter().any(|&x| x != 0)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_nonzero_at(i)).collect()
    }

    pub(crate) fn same_quotient(&self, other: &Self) -> Result<()> {
        if self.desc != other.desc {
            return Err(Error::QuotientMismatch(format!("{:?} vs {:?}", self.desc, other.desc)));
        }
        Ok(())
    }

    pub(crate) fn check_context(&self, ctx: &QuotientContext, side: Side) -> Result<()> {
        if self.desc != ctx.descriptor(side) {
            return Err(Error::QuotientMismatch(format!(
                "measure on {:?} used where {:?} is expected",
                self.desc,
                ctx.descriptor(side)
            )));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, sign: i128) -> Result<Self> {
        self.same_quotient(other)?;
        let g = self.den.gcd(&other.den);
        let (sa, sb) = (other.den / g, self.den / g);
        let den = self.den.checked_mul(sa).ok_or(Error::Overflow)?;
        let mut nums = Vec::with_capacity(self.nums.len());
        for (&a, &b) in self.nums.iter().zip(&other.nums) {
            let x = a.checked_mul(sa).ok_or(Error::Overflow)?;
            let y = b.checked_mul(sb).and_then(|y| y.checked_mul(sign)).ok_or(Error::Overflow)?;
            nums.push(x.checked_add(y).ok_or(Error::Overflow)?);
        }
        let mut m = Measure { desc: self.desc, field: self.field, den, nums };
        m.canonicalize()?;
        Ok(m)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1)
    }

    pub fn neg(&self) -> Self {
        Measure { desc: self.desc, field: self.field, den: self.den, nums: self.nums.iter().map(|x| -x).collect() }
    }

    /// Multiplication by the rational `num / den`.
    pub fn scale(&self, num: i128, den: i128) -> Result<Self> {
        let nums = self.nums.iter().map(|x| x.checked_mul(num).ok_or(Error::Overflow)).collect::<Result<_>>()?;
        let mut m = Measure { desc: self.desc, field: self.field, den: self.den.checked_mul(den).ok_or(Error::Overflow)?, nums };
        m.canonicalize()?;
        Ok(m)
    }

    /// Pointwise product of two measures on the same quotient.
    pub fn pointwise(&self, other: &Self) -> Result<Self> {
        self.same_quotient(other)?;
        let phi = self.phi();
        let order = self.field.order();
        let mut wide = vec![0i128; order.max(2 * phi)];
        let mut nums = Vec::with_capacity(self.nums.len());
        for idx in 0..self.len() {
            wide.iter_mut().for_each(|x| *x = 0);
            let (a, b) = (self.nums_at(idx), other.nums_at(idx));
            for (i, &x) in a.iter().enumerate().filter(|t| *t.1 != 0) {
                for (j, &y) in b.iter().enumerate().filter(|t| *t.1 != 0) {
                    let t = x.checked_mul(y).ok_or(Error::Overflow)?;
                    wide[i + j] = wide[i + j].checked_add(t).ok_or(Error::Overflow)?;
                }
            }
            self.field.reduce_in_place(&mut wide);
            nums.extend_from_slice(&wide[..phi]);
        }
        let den = self.den.checked_mul(other.den).ok_or(Error::Overflow)?;
        let mut m = Measure { desc: self.desc, field: self.field, den, nums };
        m.canonicalize()?;
        Ok(m)
    }

    /// `x -> mu(-x)` on the lie and dual sides.
    pub fn reflect(&self, ctx: &QuotientContext) -> Result<Self> {
        if self.side() == Side::Group {
            return Err(Error::QuotientMismatch("reflection is defined on the additive sides".into()));
        }
        self.check_context(ctx, self.side())?;
        let mut nums = Vec::with_capacity(self.nums.len());
        for x in 0..self.len() {
            nums.extend_from_slice(self.nums_at(ctx.neg(x)));
        }
        Ok(Measure { desc: self.desc, field: self.field, den: self.den, nums })
    }

    /// Sum of all values.
    pub fn total_mass(&self) -> CycloRational {
        let phi = self.phi();
        let mut acc = vec![0i128; phi];
        for chunk in self.nums.chunks(phi) {
            for (a, &x) in acc.iter_mut().zip(chunk) {
                *a += x;
            }
        }
        CycloRational::from_small(self.field, &acc, self.den)
    }

    /// `{"quotient": {...}, "entries": [{"elem": key, "coeff": ...}]}` over
    /// the nonzero values in index order.
    pub fn to_json(&self, ctx: &QuotientContext) -> Result<Value> {
        let mut entries = Vec::new();
        for idx in self.support() {
            entries.push(json!({"elem": ctx.key(idx)?, "coeff": self.value(idx).to_json()}));
        }
        Ok(json!({"quotient": self.desc, "entries": entries}))
    }

    pub fn from_json(ctx: &QuotientContext, value: &Value) -> Result<Self> {
        let q = value.get("quotient").ok_or_else(|| Error::Parse("measure needs \"quotient\"".into()))?;
        let desc: QuotientDescriptor =
            serde_json::from_value(q.clone()).map_err(|e| Error::Parse(format!("bad quotient descriptor: {e}")))?;
        if desc != ctx.descriptor(desc.side) {
            return Err(Error::QuotientMismatch(format!(
                "file is for p={} n={} e={} m={}, session is p={} n={} e={} m={}",
                desc.p,
                desc.n,
                desc.e,
                desc.m,
                ctx.session().p,
                ctx.session().n,
                ctx.session().e,
                ctx.session().m
            )));
        }
        let entries = value
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("measure needs an \"entries\" array".into()))?;
        let field = ctx.field();
        let mut vals = vec![CycloRational::zero(field); ctx.size()];
        for entry in entries {
            let key = entry
                .get("elem")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("entry needs a string \"elem\"".into()))?;
            let coeff = entry.get("coeff").ok_or_else(|| Error::Parse("entry needs \"coeff\"".into()))?;
            let idx = ctx.parse_key(key)?;
            let c = CycloRational::from_json(field, coeff)?;
            vals[idx] = &vals[idx] + &c;
        }
        Self::from_fn(ctx, desc.side, |i| vals[i].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::SessionParams;

    #[test]
    fn canonical_and_json_round_trip() {
        let ctx = QuotientContext::new(SessionParams::new(3, 1, 1, 1).unwrap()).unwrap();
        let f = ctx.field();
        let m = Measure::from_fn(&ctx, Side::Group, |i| CycloRational::zeta_pow(f, i as i64).scale_rational(
            &num_rational::BigRational::new(BigInt::from(2), BigInt::from(6)),
        ))
        .unwrap();
        assert_eq!(m.den(), 3);
        let j = m.to_json(&ctx).unwrap();
        assert_eq!(j["quotient"]["side"], "group");
        assert_eq!(j["entries"][1]["elem"], "1");
        assert_eq!(Measure::from_json(&ctx, &j).unwrap(), m);
        let z = m.sub(&m).unwrap();
        assert!(z.is_zero());
        assert_eq!(z, Measure::zero(&ctx, Side::Group));
        assert!(m.total_mass().is_zero());
    }
}
