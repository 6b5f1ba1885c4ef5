//! Special balls `c + p^{-r} L^perp` in the dual, their partition of the
//! dual, the characters `eta_B` of `K_B = K_r`, and the idempotents `e_B`.

use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expmap::{log_trunc, unrank, GroupElement};
use crate::lie::{nilpotent_in_coset, DualCoset, DualElement, ModMat, NilpotencyOutcome, Radius,
    DEFAULT_SEARCH_DEPTH, trace_pairing};
use crate::padic::{psi_of, CycloField, CycloRational, SessionParams};
use crate::quotient::{Measure, QuotientContext, Side};

/// A special ball `center + p^{-r_exp} L^perp`.
///
/// The center is stored as `p^{-k-e} C` with `|center| = q^k`, `k` equal to
/// `2 r_exp` or `2 r_exp + 1`, and `C` reduced to its least nonnegative
/// residues mod `p^{k - r_exp}`. The base ball `L^perp` has zero center and
/// `r_exp = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ball {
    center: DualElement,
    r_exp: u32,
}

impl Ball {
    /// Validates the special-ball condition and reduces the center.
    pub fn new(sp: &SessionParams, center: DualElement, r_exp: u32) -> Result<Self> {
        check_dual(sp, &center)?;
        let k = match center.norm(sp) {
            Radius::Zero => None,
            Radius::Pow(v) if v <= 0 => None,
            Radius::Pow(v) => Some(v as u32),
        };
        match k {
            None if r_exp == 0 => Ok(Self::base(sp)),
            Some(k) if k == 2 * r_exp || k == 2 * r_exp + 1 => Ok(Self::reduced(sp, &center, r_exp)),
            _ => Err(Error::InvalidParams(format!(
                "{center} with radius q^{r_exp} violates |c| = r^2 or |c p| = r^2"
            ))),
        }
    }

    fn reduced(sp: &SessionParams, center: &DualElement, r_exp: u32) -> Self {
        let k = center.k();
        let c = center.matrix().with_modulus(sp.pow(k - r_exp));
        Ball { center: DualElement::new(sp, k, c), r_exp }
    }

    /// The base ball `L^perp`.
    pub fn base(sp: &SessionParams) -> Self {
        Ball { center: DualElement::zero(sp), r_exp: 0 }
    }

    pub fn center(&self) -> &DualElement {
        &self.center
    }

    pub fn r_exp(&self) -> u32 {
        self.r_exp
    }

    /// `v` with `max(|c|, 1) = q^v`.
    pub fn norm_exponent(&self) -> u32 {
        self.center.k()
    }

    pub fn is_base(&self) -> bool {
        self.center.is_zero()
    }

    pub fn coset(&self) -> DualCoset {
        DualCoset::new(self.center.clone(), self.r_exp)
    }

    pub fn contains(&self, sp: &SessionParams, y: &DualElement) -> bool {
        self.coset().contains(sp, y)
    }

    pub(crate) fn check_session(&self, sp: &SessionParams) -> Result<()> {
        check_dual(sp, &self.center)
    }

    pub fn to_json(&self) -> Value {
        json!({"center": self.center.to_json(), "r_exp": self.r_exp})
    }

    pub fn from_json(sp: &SessionParams, value: &Value) -> Result<Self> {
        let center = DualElement::from_json(sp, value.get("center").ok_or_else(|| Error::Parse("ball needs \"center\"".into()))?)?;
        let r = value
            .get("r_exp")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("ball needs integer \"r_exp\"".into()))?;
        Self::new(sp, center, r as u32)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + p^-{} L^perp", self.center, self.r_exp)
    }
}

fn check_dual(sp: &SessionParams, y: &DualElement) -> Result<()> {
    let mat = y.matrix();
    if mat.n() != sp.n || mat.modulus() != sp.modulus() {
        return Err(Error::LevelMismatch(format!(
            "dual element is {0}x{0} mod {1}, session is {2}x{2} mod {3}",
            mat.n(),
            mat.modulus(),
            sp.n,
            sp.modulus()
        )));
    }
    Ok(())
}

/// The unique special ball containing `y`: with `max(|y|, 1) = q^v`, the
/// radius is `q^{floor(v/2)}`.
pub fn ball_of(sp: &SessionParams, y: &DualElement) -> Ball {
    let k = y.k();
    if k == 0 {
        return Ball::base(sp);
    }
    Ball::reduced(sp, y, k / 2)
}

/// All special balls with center in `p^{-level} L^perp`, ordered by norm and
/// then lexicographically by canonical center.
pub fn enumerate_balls(sp: &SessionParams, level: u32) -> Vec<Ball> {
    let mut out = vec![Ball::base(sp)];
    let width = (sp.n * sp.n) as u32;
    for k in 1..=level {
        let r = k / 2;
        let modulus = sp.pow(k - r);
        let shape = ModMat::zero(sp.n, modulus);
        let count = modulus.pow(width);
        let mut balls: Vec<Ball> = (0..count)
            .into_par_iter()
            .filter_map(|idx| {
                let c = unrank(&shape, idx);
                if c.divisible_by(sp.p) {
                    return None;
                }
                Some(Ball { center: DualElement::new(sp, k, c), r_exp: r })
            })
            .collect();
        balls.sort();
        out.extend(balls);
    }
    out
}

/// `eta_B(exp x) = psi(<c, x>)` on `K_B = K_r`, at quotient level `level`.
#[derive(Debug, Clone)]
pub struct BallCharacter {
    ball: Ball,
    level: u32,
}

impl BallCharacter {
    /// With `check`, multiplicativity is verified exhaustively on `K_r / K_level`.
    pub fn new(ctx: &QuotientContext, ball: Ball, check: bool) -> Result<Self> {
        ball.check_session(ctx.session())?;
        let level = ctx.level();
        if ball.norm_exponent() > level {
            return Err(Error::DenominatorTooDeep { depth: ball.norm_exponent(), max: level });
        }
        if check && !is_admissible(ctx, ball.center(), ball.r_exp())? {
            return Err(Error::HypothesisViolated(format!("eta is not a character for {ball}")));
        }
        Ok(BallCharacter { ball, level })
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn eval(&self, sp: &SessionParams, g: &GroupElement) -> Result<CycloRational> {
        if !g.in_level(sp, self.ball.r_exp) {
            return Err(Error::NotInLattice(format!("element lies outside K_{}", self.ball.r_exp)));
        }
        let x = log_trunc(sp, g)?;
        let t = trace_pairing(sp, &x, self.ball.center())?;
        psi_of(&t, CycloField::new(sp.p, self.level))
    }
}

/// Whether `eta(exp x) = psi(<center, x>)` is a character of `K_r / K_m`,
/// checked on all pairs.
pub fn is_admissible(ctx: &QuotientContext, center: &DualElement, r: u32) -> Result<bool> {
    check_dual(ctx.session(), center)?;
    let m = ctx.level();
    if r > m {
        return Err(Error::LevelMismatch(format!("radius q^{r} exceeds level {m}")));
    }
    let members = ctx.level_members(r);
    let exps = ctx.eta_exponents(center, r)?;
    let base = ctx.base() as u32;
    let mut full = vec![u32::MAX; ctx.size()];
    for (&g, &t) in members.iter().zip(&exps) {
        full[g] = t;
    }
    let table = ctx.mul_table();
    let size = ctx.size();
    Ok(members.par_iter().zip(exps.par_iter()).all(|(&x, &tx)| {
        members.iter().zip(&exps).all(|(&y, &ty)| {
            let xy = match table {
                Some(t) => t[x * size + y] as usize,
                None => ctx.mul(x, y),
            };
            let txy = full[xy];
            txy != u32::MAX && txy == (tx + ty) % base
        })
    }))
}

/// `e_B = eta_B * (normalized Haar on K_B)` at the context level; the zero
/// measure when `eta_B` is nontrivial on `K_m`.
pub fn hecke_idempotent(ctx: &QuotientContext, ball: &Ball) -> Result<Measure> {
    ball.check_session(ctx.session())?;
    if ball.norm_exponent() > ctx.level() {
        return Ok(Measure::zero(ctx, Side::Group));
    }
    coset_idempotent(ctx, ball.center(), ball.r_exp())
}

/// `eta * (normalized Haar on K_r)` with `eta(exp x) = psi(<center, x>)`,
/// for any center in `p^{-m} L^perp`.
pub fn coset_idempotent(ctx: &QuotientContext, center: &DualElement, r: u32) -> Result<Measure> {
    check_dual(ctx.session(), center)?;
    let members = ctx.level_members(r);
    let exps = ctx.eta_exponents(center, r)?;
    let order = ctx.field().order();
    let mut wide = vec![0i128; ctx.size() * order];
    for (&g, &t) in members.iter().zip(&exps) {
        wide[g * order + t as usize] = 1;
    }
    Measure::from_wide(ctx, Side::Group, wide, members.len() as i128)
}

/// Whether `eta_B` is nontrivial on `K_{max(r, j)}`, the intersection of `K_B` and `K_j`.
pub fn eta_nontrivial_on(ctx: &QuotientContext, ball: &Ball, j: u32) -> Result<bool> {
    ball.check_session(ctx.session())?;
    if ball.norm_exponent() > ctx.level() {
        return Ok(true);
    }
    let r = ball.r_exp().max(j);
    Ok(ctx.eta_exponents(ball.center(), r)?.iter().any(|&t| t != 0))
}

/// Whether the ball meets the nilpotent cone.
pub fn classify_nilpotent(sp: &SessionParams, ball: &Ball) -> NilpotencyOutcome {
    nilpotent_in_coset(sp, ball.center(), ball.r_exp(), DEFAULT_SEARCH_DEPTH)
}

/// `|K_0 / K_m| e_B(1)`, the rank of convolution by `e_B` on the group algebra.
pub fn idempotent_rank(ctx: &QuotientContext, ball: &Ball) -> u64 {
    if ball.norm_exponent() > ctx.level() {
        return 0;
    }
    ctx.size() as u64 / ctx.level_members(ball.r_exp()).len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl1(m: u32) -> SessionParams {
        SessionParams::new(3, 1, 1, m).unwrap()
    }

    fn dual(sp: &SessionParams, k: u32, v: &[i64]) -> DualElement {
        DualElement::new(sp, k, ModMat::from_i64(sp.n, sp.modulus(), v))
    }

    #[test]
    fn ball_of_examples() {
        let sp = gl1(2);
        assert!(ball_of(&sp, &dual(&sp, 0, &[5])).is_base());
        // 1/27 = p^{-2-e}: |y| = q^2, radius q
        let b = ball_of(&sp, &dual(&sp, 2, &[1]));
        assert_eq!((b.norm_exponent(), b.r_exp()), (2, 1));
        assert!(b.contains(&sp, &dual(&sp, 2, &[4])));
        assert!(!b.contains(&sp, &dual(&sp, 2, &[2])));
        assert_eq!(ball_of(&sp, &dual(&sp, 2, &[7])), b);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_balls(&gl1(1), 1).len(), 3);
        let sp = SessionParams::new(3, 2, 1, 2).unwrap();
        let balls = enumerate_balls(&sp, 2);
        assert_eq!(balls.len(), 161);
        assert_eq!(balls.iter().filter(|b| b.r_exp() == 0).count(), 81);
        assert!(balls.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn special_condition_enforced() {
        let sp = gl1(3);
        assert!(Ball::new(&sp, dual(&sp, 2, &[1]), 1).is_ok());
        assert!(Ball::new(&sp, dual(&sp, 3, &[1]), 1).is_ok());
        assert!(Ball::new(&sp, dual(&sp, 2, &[1]), 0).is_err());
        assert!(Ball::new(&sp, DualElement::zero(&sp), 1).is_err());
        let other = SessionParams::new(3, 2, 1, 2).unwrap();
        assert!(matches!(Ball::new(&other, dual(&sp, 2, &[1]), 1), Err(Error::LevelMismatch(_))));
    }

    #[test]
    fn gl1_idempotents() {
        let sp = gl1(1);
        let ctx = QuotientContext::new(sp).unwrap();
        let f = CycloField::new(3, 1);
        let base = hecke_idempotent(&ctx, &Ball::base(&sp)).unwrap();
        for g in 0..3 {
            assert_eq!(base.value(g), CycloRational::from_rational(f, 1, 3));
        }
        // center 1/9: values psi(3t/9)/3 at exp(3t)
        let b = Ball::new(&sp, dual(&sp, 1, &[1]), 0).unwrap();
        let e = hecke_idempotent(&ctx, &b).unwrap();
        for t in 0..3 {
            let g = ctx.exp_of(t);
            let third = num_rational::BigRational::new(1.into(), 3.into());
            assert_eq!(e.value(g), CycloRational::zeta_pow(f, t as i64).scale_rational(&third));
        }
        let big = Ball::new(&sp, dual(&sp, 4, &[1]), 2).unwrap();
        assert!(hecke_idempotent(&ctx, &big).unwrap().is_zero());
    }

    #[test]
    fn character_evaluation() {
        let sp = gl1(1);
        let ctx = QuotientContext::new(sp).unwrap();
        let b = Ball::new(&sp, dual(&sp, 1, &[1]), 0).unwrap();
        let ch = BallCharacter::new(&ctx, b, true).unwrap();
        let g = GroupElement::new(&sp, ModMat::from_i64(1, sp.modulus(), &[4])).unwrap();
        let x = log_trunc(&sp, &g).unwrap();
        let t = trace_pairing(&sp, &x, ch.ball().center()).unwrap();
        assert_eq!(ch.eval(&sp, &g).unwrap(), psi_of(&t, CycloField::new(3, 1)).unwrap());
    }
}
