//! Values frozen from hand derivations and exact rational series computed
//! outside this crate.

use std::collections::BTreeSet;

use serde_json::Value;

use padic_balls::balls::{classify_nilpotent, enumerate_balls, hecke_idempotent, idempotent_rank, Ball};
use padic_balls::expmap::{exp_trunc, log_trunc, truncation_bound, GroupElement};
use padic_balls::lie::{DualElement, LieElement, ModMat};
use padic_balls::padic::{psi_of, CycloField, CycloRational, SessionParams, TruncatedScalar};
use padic_balls::quotient::{exp_pullback, fourier, Measure, QuotientContext, Side};

fn gl1(m: u32) -> SessionParams {
    SessionParams::new(3, 1, 1, m).unwrap()
}

fn gl2() -> SessionParams {
    SessionParams::new(3, 2, 1, 2).unwrap()
}

#[test]
fn exp_and_log_match_rational_series() {
    // sum 3^k / k! and sum (-1)^{k+1} 3^k / k reduced mod 3^8
    let sp = gl1(2);
    let x = LieElement::new(&sp, ModMat::from_i64(1, sp.modulus(), &[3])).unwrap();
    assert_eq!(exp_trunc(&sp, &x).unwrap().matrix().data(), &[958]);
    let g = GroupElement::new(&sp, ModMat::from_i64(1, sp.modulus(), &[4])).unwrap();
    assert_eq!(log_trunc(&sp, &g).unwrap().matrix().data(), &[1992]);

    let sp = gl2();
    let x = LieElement::new(&sp, ModMat::from_i64(2, sp.modulus(), &[3, 3, 0, 6])).unwrap();
    assert_eq!(exp_trunc(&sp, &x).unwrap().matrix().data(), &[958, 4827, 0, 5785]);
    let nil = LieElement::new(&sp, ModMat::from_i64(2, sp.modulus(), &[0, 3, 0, 0])).unwrap();
    assert_eq!(exp_trunc(&sp, &nil).unwrap().matrix().data(), &[1, 3, 0, 1]);
    assert_eq!(truncation_bound(&sp), 13);
}

#[test]
fn exp_is_a_bijection_on_the_gl2_quotient() {
    let ctx = QuotientContext::new(gl2()).unwrap();
    let images: BTreeSet<usize> = (0..ctx.size()).map(|x| ctx.exp_of(x)).collect();
    assert_eq!(images.len(), 6561);
    assert!((0..ctx.size()).all(|x| ctx.log_of(ctx.exp_of(x)) == x));
}

#[test]
fn psi_values() {
    let f = CycloField::new(3, 2);
    let s = |num: i64, den: i64| TruncatedScalar::from_ratio(3, 8, num, den).unwrap();
    assert_eq!(psi_of(&s(1, 9), f).unwrap(), CycloRational::zeta_pow(f, 1));
    assert_eq!(psi_of(&s(1, 3), f).unwrap(), CycloRational::zeta_pow(f, 3));
    assert_eq!(psi_of(&s(-7, 9), f).unwrap(), CycloRational::zeta_pow(f, 2));
    assert!(psi_of(&s(5, 1), f).unwrap().is_one());
    // 1 + zeta_3 + zeta_3^2 = 0
    let sum = (0..3).fold(CycloRational::zero(f), |acc, t| acc.add(&CycloRational::zeta_pow(f, 3 * t)));
    assert!(sum.is_zero());
}

#[test]
fn gl1_fourier_of_a_point_class() {
    // F(1_{1/9 + L^perp}) = (1/3) psi(x / 9) at p = 3, m = 1
    let sp = gl1(1);
    let ctx = QuotientContext::new(sp).unwrap();
    let y = DualElement::new(&sp, 1, ModMat::from_i64(1, sp.modulus(), &[1]));
    let f = fourier(&ctx, &Measure::delta(&ctx, Side::Dual, ctx.dual_index(&y).unwrap())).unwrap();
    let field = ctx.field();
    for x in 0..3 {
        let expected = CycloRational::zeta_pow(field, x as i64).mul(&CycloRational::from_rational(field, 1, 3));
        assert_eq!(f.value(x), expected);
    }
    let uniform = fourier(&ctx, &Measure::delta(&ctx, Side::Dual, 0)).unwrap();
    assert!((0..3).all(|x| uniform.value(x) == CycloRational::from_rational(field, 1, 3)));
}

#[test]
fn pullback_of_haar_is_haar() {
    let ctx = QuotientContext::new(gl2()).unwrap();
    let haar = hecke_idempotent(&ctx, &Ball::base(ctx.session())).unwrap();
    let pulled = exp_pullback(&ctx, &haar).unwrap();
    let expected = CycloRational::from_rational(ctx.field(), 1, 6561);
    assert!((0..ctx.size()).all(|x| pulled.value(x) == expected));
}

#[test]
fn hand_derived_idempotent_file() {
    // eta(1 + 3X) = psi(<1/9, 3X>) = zeta_3^X, so e_B = zeta_3^X / 3
    let sp = gl1(1);
    let ctx = QuotientContext::new(sp).unwrap();
    let text = include_str!("data/idempotent_gl1_p3_m1.json");
    let value: Value = serde_json::from_str(text).unwrap();
    let file = Measure::from_json(&ctx, &value).unwrap();
    let center = DualElement::new(&sp, 1, ModMat::from_i64(1, sp.modulus(), &[1]));
    let ball = Ball::new(&sp, center, 0).unwrap();
    assert_eq!(hecke_idempotent(&ctx, &ball).unwrap(), file);
}

#[test]
fn gl2_census_counts() {
    // 1 base ball, 80 nonzero classes mod 3 at |c| = q (radius 1) and 80 at
    // |c| = q^2 (radius q); nonzero nilpotent 2x2 matrices over F_3 number 3^2 - 1
    let sp = gl2();
    let ctx = QuotientContext::new(sp).unwrap();
    let balls = enumerate_balls(&sp, 2);
    assert_eq!(balls.len(), 161);
    assert_eq!(balls.iter().filter(|b| b.r_exp() == 0).count(), 81);
    assert_eq!(balls.iter().filter(|b| b.norm_exponent() == 2).count(), 80);
    let nilpotent = balls.iter().filter(|b| classify_nilpotent(&sp, b).is_yes()).count();
    assert_eq!(nilpotent, 1 + 8 + 8);
    let ranks: u64 = balls.iter().map(|b| idempotent_rank(&ctx, b)).sum();
    assert_eq!(ranks, 81 + 80 * 81);
}

#[test]
fn coadjoint_preserves_levels_exhaustively() {
    let sp = gl2();
    let ctx = QuotientContext::new(sp).unwrap();
    for g in [1usize, 10, 4000, 6560] {
        let gm = ctx.group_element(g);
        for idx in 0..ctx.size() {
            let y = ctx.dual_element(idx);
            let moved = y.coadjoint(&sp, gm.matrix()).unwrap();
            assert_eq!(moved.norm(&sp), y.norm(&sp));
        }
    }
}
