//! Identity checks over whole families of balls and measures.

use std::collections::BTreeSet;

use rand::Rng;
use rayon::prelude::*;

use super::kernels::Projector;
use super::{convolve, exp_pullback, translate, Measure, QuotientContext, Side};
use crate::balls::{ball_of, coset_idempotent, eta_nontrivial_on, hecke_idempotent, Ball};
use crate::error::{Error, Result};
use crate::lie::{coset_intersects, DualElement, Radius};
use crate::padic::CycloRational;

/// A measure with small random cyclotomic values on the given support.
pub fn random_measure<R: Rng>(ctx: &QuotientContext, side: Side, rng: &mut R, support: &[usize]) -> Result<Measure> {
    let phi = ctx.field().degree();
    let mut nums = vec![0i128; ctx.size() * phi];
    for &idx in support {
        for slot in &mut nums[idx * phi..(idx + 1) * phi] {
            *slot = rng.gen_range(-3..=3);
        }
    }
    let den = rng.gen_range(1..=4);
    Measure::from_parts(ctx, side, nums, den)
}

/// `sum_i c_i sum_h delta_{h g_i h^{-1}}`, a class function on `K_0 / K_m`.
pub fn class_function(ctx: &QuotientContext, seeds: &[(usize, i64)]) -> Result<Measure> {
    let phi = ctx.field().degree();
    let mut nums = vec![0i128; ctx.size() * phi];
    for &(g, c) in seeds {
        for h in 0..ctx.size() {
            let conj = ctx.mul(ctx.mul(h, g), ctx.inv(h));
            nums[conj * phi] += c as i128;
        }
    }
    Measure::from_parts(ctx, Side::Group, nums, 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectorReport {
    pub balls: usize,
    pub idempotence_failures: Vec<usize>,
    pub orthogonality_checked: usize,
    pub orthogonality_failures: Vec<(usize, usize)>,
    pub completeness_residual_zero: bool,
    pub ranks: Vec<u64>,
    pub rank_total: u64,
    pub quotient_size: u64,
}

impl ProjectorReport {
    pub fn passed(&self) -> bool {
        self.idempotence_failures.is_empty()
            && self.orthogonality_failures.is_empty()
            && self.completeness_residual_zero
            && self.rank_total == self.quotient_size
    }
}

/// Idempotence of every `e_B`, orthogonality of distinct pairs (all of them
/// when there are at most `pair_samples`, otherwise that many random ordered
/// pairs), completeness `sum_B e_B = delta_e`, and rank accounting through
/// `rank(e_B) = |Q| e_B(1)`.
pub fn projector_family_check<R: Rng>(
    ctx: &QuotientContext,
    balls: &[Ball],
    pair_samples: usize,
    rng: &mut R,
) -> Result<ProjectorReport> {
    let idem: Vec<Measure> = balls.par_iter().map(|b| hecke_idempotent(ctx, b)).collect::<Result<_>>()?;
    let idempotence_failures: Vec<usize> = idem
        .par_iter()
        .enumerate()
        .map(|(i, e)| convolve(ctx, e, e).map(|sq| (&sq != e).then_some(i)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let nb = balls.len();
    let total_pairs = nb * nb.saturating_sub(1);
    let pairs: Vec<(usize, usize)> = if total_pairs <= pair_samples {
        (0..nb).flat_map(|i| (0..nb).filter(move |&j| j != i).map(move |j| (i, j))).collect()
    } else {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(pair_samples);
        while out.len() < pair_samples {
            let i = rng.gen_range(0..nb);
            let j = rng.gen_range(0..nb);
            if i != j && seen.insert((i, j)) {
                out.push((i, j));
            }
        }
        out
    };
    let orthogonality_failures: Vec<(usize, usize)> = pairs
        .par_iter()
        .map(|&(i, j)| convolve(ctx, &idem[i], &idem[j]).map(|prod| (!prod.is_zero()).then_some((i, j))))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut sum = Measure::zero(ctx, Side::Group);
    for e in &idem {
        sum = sum.add(e)?;
    }
    let residual = sum.sub(&Measure::delta(ctx, Side::Group, 0))?;

    let size = ctx.size() as i128;
    let ranks: Vec<u64> = idem
        .iter()
        .map(|e| {
            let at_one = e.nums_at(0);
            let trace = at_one[0] * size;
            let integral = at_one.iter().skip(1).all(|&c| c == 0) && trace % e.den() == 0;
            if integral {
                Ok((trace / e.den()) as u64)
            } else {
                Err(Error::HypothesisViolated("e_B(1) |Q| is not an integer".into()))
            }
        })
        .collect::<Result<_>>()?;
    let rank_total = ranks.iter().sum();
    Ok(ProjectorReport {
        balls: nb,
        idempotence_failures,
        orthogonality_checked: pairs.len(),
        orthogonality_failures,
        completeness_residual_zero: residual.is_zero(),
        ranks,
        rank_total,
        quotient_size: ctx.size() as u64,
    })
}

/// Equivariance of the image of `e_B`: `delta_k * (e_B * xi) = eta(k)^{-1} (e_B * xi)`
/// for each listed `k` in `K_B`.
pub fn image_equivariance(ctx: &QuotientContext, ball: &Ball, xi: &Measure, ks: &[usize]) -> Result<bool> {
    let img = Projector::new(ctx, ball)?.apply(ctx, xi)?;
    let members = ctx.level_members(ball.r_exp());
    let exps = ctx.eta_exponents(ball.center(), ball.r_exp())?;
    let field = ctx.field();
    for &k in ks {
        let pos = members.binary_search(&k).map_err(|_| Error::NotInLattice("k lies outside K_B".into()))?;
        let lhs = translate(ctx, k, &img)?;
        let root = CycloRational::zeta_pow(field, -(exps[pos] as i64));
        let root_measure = Measure::from_fn(ctx, Side::Group, |_| root.clone())?;
        if lhs != img.pointwise(&root_measure)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FouExpReport {
    /// `exp^*(e_B * xi) = exp^*(e_B) * exp^*(xi)`.
    pub holds: bool,
    /// The same identity with the factors in the other order.
    pub reversed_holds: bool,
}

/// Checks `exp^*(e_B * xi) = exp^*(e_B) * exp^*(xi)` for the ball
/// `B = a + p^{-n} L^perp` with `|a| = q^{n+l}`, at level `n + l`, for `xi`
/// supported in `K_l / K_{n+l}`.
pub fn check_fouexp(ctx: &QuotientContext, center: &DualElement, n: u32, l: u32, xi: &Measure) -> Result<FouExpReport> {
    if n == 0 || l == 0 {
        return Err(Error::HypothesisViolated("need n, l > 0".into()));
    }
    if ctx.level() != n + l {
        return Err(Error::HypothesisViolated(format!("level {} differs from n + l = {}", ctx.level(), n + l)));
    }
    if center.norm(ctx.session()) != Radius::Pow((n + l) as i64) {
        return Err(Error::HypothesisViolated(format!("|a| must be q^{}", n + l)));
    }
    xi.check_context(ctx, Side::Group)?;
    if xi.support().iter().any(|&g| !ctx.in_level(g, l)) {
        return Err(Error::HypothesisViolated(format!("xi must be supported in K_{l}")));
    }
    let e = coset_idempotent(ctx, center, n)?;
    let (pe, px) = (exp_pullback(ctx, &e)?, exp_pullback(ctx, xi)?);
    let holds = exp_pullback(ctx, &convolve(ctx, &e, xi)?)? == convolve(ctx, &pe, &px)?;
    let reversed_holds = exp_pullback(ctx, &convolve(ctx, xi, &e)?)? == convolve(ctx, &px, &pe)?;
    Ok(FouExpReport { holds, reversed_holds })
}

/// The averaging case: `exp^*(e_{K_n} * xi) = exp^*(e_{K_n}) * exp^*(xi)` for
/// arbitrary `xi` on `K_0 / K_m`.
pub fn fouexp_base_case(ctx: &QuotientContext, n: u32, xi: &Measure) -> Result<bool> {
    if n > ctx.level() {
        return Err(Error::HypothesisViolated(format!("n = {n} exceeds the level")));
    }
    let e = coset_idempotent(ctx, &DualElement::zero(ctx.session()), n)?;
    let lhs = exp_pullback(ctx, &convolve(ctx, &e, xi)?)?;
    let rhs = convolve(ctx, &exp_pullback(ctx, &e)?, &exp_pullback(ctx, xi)?)?;
    Ok(lhs == rhs)
}

/// Balls with `e_B * xi != 0`, in the order given.
pub fn spectrum(ctx: &QuotientContext, balls: &[Ball], xi: &Measure) -> Result<Vec<Ball>> {
    xi.check_context(ctx, Side::Group)?;
    let hits = balls
        .par_iter()
        .map(|b| Projector::new(ctx, b)?.apply(ctx, xi).map(|img| (!img.is_zero()).then(|| b.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(hits.into_iter().flatten().collect())
}

/// Whether `ball_of(g c g^{-1})` stays in the set for every listed `g`.
pub fn is_coadjoint_stable(ctx: &QuotientContext, set: &[Ball], gs: &[usize]) -> Result<bool> {
    let sp = ctx.session();
    let lookup: BTreeSet<&Ball> = set.iter().collect();
    for b in set {
        for &g in gs {
            let moved = b.center().coadjoint(sp, ctx.group_element(g).matrix())?;
            if !lookup.contains(&ball_of(sp, &moved)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdjointReport {
    pub nonzero: bool,
    pub intersects: bool,
}

impl AdjointReport {
    /// `e_T * delta_g * e_S != 0` implies `Ad(g) S` meets `T`.
    pub fn holds(&self) -> bool {
        !self.nonzero || self.intersects
    }
}

pub fn check_adjoint_constraint(ctx: &QuotientContext, g: usize, s: &Ball, t: &Ball) -> Result<AdjointReport> {
    let sp = ctx.session();
    let es = hecke_idempotent(ctx, s)?;
    let prod = Projector::new(ctx, t)?.apply(ctx, &translate(ctx, g, &es)?)?;
    let moved = s.center().coadjoint(sp, ctx.group_element(g).matrix())?;
    let intersects = coset_intersects(sp, &moved, s.r_exp(), t.center(), t.r_exp());
    Ok(AdjointReport { nonzero: !prod.is_zero(), intersects })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigBallReport {
    /// Number of cosets of `K_{n_inv}`, the dimension of the invariant space.
    pub basis_size: usize,
    /// Basis vectors convolved; the scan stops at the first survivor.
    pub tested: usize,
    /// A coset representative `s` with `e_B * 1_{K_{n_inv} s} != 0`, if any.
    pub survivor: Option<usize>,
    pub eta_nontrivial: bool,
}

impl BigBallReport {
    pub fn vanishes(&self) -> bool {
        self.survivor.is_none()
    }
}

/// Convolves `e_B` with the indicator of each coset `K_{n_inv} s`, a basis of
/// the `K_{n_inv}`-invariant measures, until one image is nonzero.
pub fn big_ball_vanishing_check(ctx: &QuotientContext, n_inv: u32, ball: &Ball) -> Result<BigBallReport> {
    if n_inv > ctx.level() {
        return Err(Error::LevelMismatch(format!("invariance level {n_inv} exceeds the quotient level")));
    }
    let e = hecke_idempotent(ctx, ball)?;
    let reps = ctx.coset_reps(n_inv);
    let members = ctx.level_members(n_inv);
    let phi = ctx.field().degree();
    let mut tested = 0;
    let mut survivor = None;
    for &s in &reps {
        let mut nums = vec![0i128; ctx.size() * phi];
        for &k in &members {
            nums[ctx.mul(k, s) * phi] = 1;
        }
        let v = Measure::from_parts(ctx, Side::Group, nums, 1)?;
        tested += 1;
        if !convolve(ctx, &e, &v)?.is_zero() {
            survivor = Some(s);
            break;
        }
    }
    Ok(BigBallReport { basis_size: reps.len(), tested, survivor, eta_nontrivial: eta_nontrivial_on(ctx, ball, n_inv)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balls::enumerate_balls;
    use crate::padic::SessionParams;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gl1_family_is_complete() {
        for m in 1..=2 {
            let sp = SessionParams::new(3, 1, 1, m).unwrap();
            let ctx = QuotientContext::new(sp).unwrap();
            let balls = enumerate_balls(&sp, m);
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            let rep = projector_family_check(&ctx, &balls, usize::MAX, &mut rng).unwrap();
            assert!(rep.passed(), "{rep:?}");
            assert_eq!(rep.rank_total, 3u64.pow(m));
        }
    }

    #[test]
    fn strict_subfamily_leaves_residual() {
        let sp = SessionParams::new(3, 1, 1, 1).unwrap();
        let ctx = QuotientContext::new(sp).unwrap();
        let balls = enumerate_balls(&sp, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rep = projector_family_check(&ctx, &balls[1..], usize::MAX, &mut rng).unwrap();
        assert!(!rep.completeness_residual_zero);
    }

    #[test]
    fn spectrum_of_delta_and_idempotent() {
        let sp = SessionParams::new(3, 1, 1, 2).unwrap();
        let ctx = QuotientContext::new(sp).unwrap();
        let balls = enumerate_balls(&sp, 2);
        let all = spectrum(&ctx, &balls, &Measure::delta(&ctx, Side::Group, 0)).unwrap();
        assert_eq!(all, balls);
        let e = hecke_idempotent(&ctx, &balls[4]).unwrap();
        assert_eq!(spectrum(&ctx, &balls, &e).unwrap(), vec![balls[4].clone()]);
    }

    #[test]
    fn adjoint_trivial_cases() {
        let sp = SessionParams::new(3, 1, 1, 2).unwrap();
        let ctx = QuotientContext::new(sp).unwrap();
        let balls = enumerate_balls(&sp, 2);
        let same = check_adjoint_constraint(&ctx, 0, &balls[3], &balls[3]).unwrap();
        assert!(same.nonzero && same.intersects);
        let other = check_adjoint_constraint(&ctx, 0, &balls[3], &balls[4]).unwrap();
        assert!(!other.nonzero && other.holds());
    }
}
