use num_bigint::BigInt;
use proptest::prelude::*;

use padic_balls::balls::{ball_of, enumerate_balls, Ball};
use padic_balls::expmap::{exp_trunc, log_trunc};
use padic_balls::lie::{
    nilpotent_in_coset, trace_pairing, DualCoset, DualElement, LieElement, ModMat, Radius, DEFAULT_SEARCH_DEPTH,
};
use padic_balls::padic::{psi_of, CycloField, CycloRational, SessionParams, TruncatedScalar};
use padic_balls::quotient::{convolve, fourier, fourier_companion, random_measure, Measure, QuotientContext, Side};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const P: u64 = 3;
const N: u32 = 8;

fn gl2() -> SessionParams {
    SessionParams::new(3, 2, 1, 2).unwrap()
}

fn cyclo(field: CycloField) -> impl Strategy<Value = CycloRational> {
    (prop::collection::vec(-20i64..=20, field.order()), 1i64..=12).prop_map(move |(c, d)| {
        CycloRational::from_raw(field, c.into_iter().map(BigInt::from).collect(), BigInt::from(d))
    })
}

fn scalar() -> impl Strategy<Value = TruncatedScalar> {
    (-2000i64..2000, 0u32..4).prop_map(|(a, k)| TruncatedScalar::from_ratio(P, N, a, 3i64.pow(k)).unwrap())
}

fn mat(n: usize, modulus: u64) -> impl Strategy<Value = ModMat> {
    prop::collection::vec(0..modulus, n * n).prop_map(move |v| ModMat::from_vec(n, modulus, v))
}

fn unit_mat(sp: SessionParams) -> impl Strategy<Value = ModMat> {
    mat(sp.n, sp.modulus()).prop_filter("invertible mod p", |g| g.inverse().is_ok())
}

fn dual(sp: SessionParams, max_k: u32) -> impl Strategy<Value = DualElement> {
    (0..=max_k, mat(sp.n, sp.modulus())).prop_map(move |(k, m)| DualElement::new(&sp, k, m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclotomic_ring_axioms(
        a in cyclo(CycloField::new(3, 2)),
        b in cyclo(CycloField::new(3, 2)),
        c in cyclo(CycloField::new(3, 2)),
    ) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        prop_assert_eq!(a.mul(&CycloRational::one(a.field())), a);
    }

    #[test]
    fn roots_of_unity_multiply(s in -50i64..50, t in -50i64..50) {
        let f = CycloField::new(3, 2);
        prop_assert_eq!(CycloRational::zeta_pow(f, s).mul(&CycloRational::zeta_pow(f, t)), CycloRational::zeta_pow(f, s + t));
    }

    #[test]
    fn psi_is_additive(a in scalar(), b in scalar()) {
        let f = CycloField::new(3, 3);
        let lhs = psi_of(&a.add(&b), f).unwrap();
        prop_assert_eq!(lhs, psi_of(&a, f).unwrap().mul(&psi_of(&b, f).unwrap()));
    }

    #[test]
    fn valuation_is_ultrametric(a in scalar(), b in scalar()) {
        let s = a.add(&b);
        if let (Some(va), Some(vb), Some(vs)) = (a.valuation(), b.valuation(), s.valuation()) {
            prop_assert!(vs >= va.min(vb));
            if va != vb {
                prop_assert_eq!(vs, va.min(vb));
            }
        }
    }

    #[test]
    fn cyclotomic_json_round_trip(a in cyclo(CycloField::new(3, 2))) {
        prop_assert_eq!(CycloRational::from_json(a.field(), &a.to_json()).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exp_and_log_are_inverse(m in mat(2, 3u64.pow(10))) {
        let sp = gl2();
        let x = LieElement::from_coords(&sp, 0, &m).unwrap();
        let g = exp_trunc(&sp, &x).unwrap();
        let back = log_trunc(&sp, &g).unwrap();
        prop_assert_eq!(back.matrix(), x.matrix());
    }

    #[test]
    fn exp_is_a_homomorphism_on_lines(m in mat(2, 3u64.pow(10)), a in 0i64..6561, b in 0i64..6561) {
        let sp = gl2();
        let x = LieElement::from_coords(&sp, 0, &m).unwrap();
        let lhs = exp_trunc(&sp, &x.scale(a)).unwrap().mul(&sp, &exp_trunc(&sp, &x.scale(b)).unwrap());
        let rhs = exp_trunc(&sp, &x.scale(a + b)).unwrap();
        prop_assert_eq!(lhs.matrix(), rhs.matrix());
    }

    #[test]
    fn exp_commutes_with_conjugation(m in mat(2, 3u64.pow(10)), g in unit_mat(gl2())) {
        let sp = gl2();
        let x = LieElement::from_coords(&sp, 0, &m).unwrap();
        let gi = g.inverse().unwrap();
        let conj = LieElement::new(&sp, g.mul(x.matrix()).mul(&gi)).unwrap();
        let lhs = exp_trunc(&sp, &conj).unwrap();
        prop_assert_eq!(lhs.matrix(), &g.mul(exp_trunc(&sp, &x).unwrap().matrix()).mul(&gi));
    }

    #[test]
    fn coadjoint_preserves_pairing(m in mat(2, 3u64.pow(10)), y in dual(gl2(), 3), g in unit_mat(gl2())) {
        let sp = gl2();
        let x = LieElement::from_coords(&sp, 0, &m).unwrap();
        let ax = LieElement::new(&sp, g.mul(x.matrix()).mul(&g.inverse().unwrap())).unwrap();
        let lhs = trace_pairing(&sp, &ax, &y.coadjoint(&sp, &g).unwrap()).unwrap();
        prop_assert_eq!(lhs, trace_pairing(&sp, &x, &y).unwrap());
    }

    #[test]
    fn coadjoint_is_an_action(y in dual(gl2(), 3), g in unit_mat(gl2()), h in unit_mat(gl2())) {
        let sp = gl2();
        let lhs = y.coadjoint(&sp, &g.mul(&h)).unwrap();
        prop_assert_eq!(lhs, y.coadjoint(&sp, &h).unwrap().coadjoint(&sp, &g).unwrap());
        prop_assert_eq!(y.coadjoint(&sp, &g).unwrap().norm(&sp), y.norm(&sp));
    }

    #[test]
    fn ball_of_contains_and_is_coadjoint_equivariant(y in dual(gl2(), 4), g in unit_mat(gl2())) {
        let sp = gl2();
        let b = ball_of(&sp, &y);
        prop_assert!(b.contains(&sp, &y));
        prop_assert!(b.contains(&sp, b.center()));
        let moved = y.coadjoint(&sp, &g).unwrap();
        prop_assert_eq!(ball_of(&sp, &moved).r_exp(), b.r_exp());
        prop_assert!(ball_of(&sp, &moved).contains(&sp, &b.center().coadjoint(&sp, &g).unwrap()));
    }

    #[test]
    fn special_balls_scale_by_p_inverse_squared(y in dual(gl2(), 3)) {
        let sp = gl2();
        prop_assume!(y.norm(&sp) != Radius::Zero && y.norm(&sp) != Radius::Pow(0));
        let b = ball_of(&sp, &y);
        let scaled = ball_of(&sp, &y.scale_pow(&sp, -2));
        prop_assert_eq!(scaled.r_exp(), b.r_exp() + 1);
        let dilated = DualCoset::new(b.center().scale_pow(&sp, -2), b.r_exp() + 2);
        prop_assert!(dilated.contains(&sp, scaled.center()));
    }

    #[test]
    fn nilpotency_is_scaling_invariant(y in dual(gl2(), 2), level in 0u32..2, j in 1i64..3) {
        let sp = gl2();
        let a = nilpotent_in_coset(&sp, &y, level, DEFAULT_SEARCH_DEPTH);
        let b = nilpotent_in_coset(&sp, &y.scale_pow(&sp, -j), level + j as u32, DEFAULT_SEARCH_DEPTH);
        prop_assert_eq!(a.is_yes(), b.is_yes());
        prop_assert_eq!(a.is_no(), b.is_no());
    }

    #[test]
    fn ball_json_round_trip(y in dual(gl2(), 4)) {
        let sp = gl2();
        let b = ball_of(&sp, &y);
        prop_assert_eq!(Ball::from_json(&sp, &b.to_json()).unwrap(), b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn convolution_is_associative_with_unit(seed in any::<u64>()) {
        let sp = SessionParams::new(3, 2, 1, 1).unwrap();
        let ctx = QuotientContext::new(sp).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for side in [Side::Group, Side::Lie] {
            let supp: Vec<usize> = (0..ctx.size()).step_by(2).collect();
            let a = random_measure(&ctx, side, &mut rng, &supp).unwrap();
            let b = random_measure(&ctx, side, &mut rng, &supp[..20]).unwrap();
            let c = random_measure(&ctx, side, &mut rng, &supp[5..30]).unwrap();
            let ab_c = convolve(&ctx, &convolve(&ctx, &a, &b).unwrap(), &c).unwrap();
            prop_assert_eq!(ab_c, convolve(&ctx, &a, &convolve(&ctx, &b, &c).unwrap()).unwrap());
            let unit = Measure::delta(&ctx, side, 0);
            prop_assert_eq!(convolve(&ctx, &unit, &a).unwrap(), a.clone());
            prop_assert_eq!(convolve(&ctx, &a, &unit).unwrap(), a);
        }
    }

    #[test]
    fn double_fourier_is_reflection(seed in any::<u64>()) {
        let sp = SessionParams::new(3, 2, 1, 1).unwrap();
        let ctx = QuotientContext::new(sp).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all: Vec<usize> = (0..ctx.size()).collect();
        let f = random_measure(&ctx, Side::Dual, &mut rng, &all).unwrap();
        let back = fourier_companion(&ctx, &fourier(&ctx, &f).unwrap()).unwrap();
        prop_assert_eq!(back, f.reflect(&ctx).unwrap());
    }

    #[test]
    fn measure_json_round_trip(seed in any::<u64>()) {
        let sp = SessionParams::new(3, 1, 1, 2).unwrap();
        let ctx = QuotientContext::new(sp).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all: Vec<usize> = (0..ctx.size()).collect();
        let mu = random_measure(&ctx, Side::Lie, &mut rng, &all[..5]).unwrap();
        prop_assert_eq!(Measure::from_json(&ctx, &mu.to_json(&ctx).unwrap()).unwrap(), mu);
    }
}

#[test]
fn enumeration_is_sorted_and_closed_under_ball_of() {
    let sp = gl2();
    let balls = enumerate_balls(&sp, 2);
    assert!(balls.windows(2).all(|w| w[0] < w[1]));
    for b in &balls {
        assert_eq!(&ball_of(&sp, b.center()), b);
    }
}
