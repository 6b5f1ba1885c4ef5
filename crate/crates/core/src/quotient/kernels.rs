//! Convolution, Fourier transforms, pullback and ball projections.
//!
//! Kernels accumulate in the redundant basis `zeta^0 .. zeta^{p^m - 1}`, where
//! multiplying by a root of unity is a rotation, and reduce to the power
//! basis once at the end.

use std::ops::{AddAssign, Mul};

use rayon::prelude::*;

use super::{Measure, QuotientContext, Side};
use crate::balls::Ball;
use crate::error::{Error, Result};
use crate::padic::CycloRational;

/// Terms `(element, exponent, coeff)` with `value = sum coeff * zeta^exponent`.
fn sparse_terms(ctx: &QuotientContext, mu: &Measure) -> Vec<(u32, u32, i128)> {
    let field = ctx.field();
    let order = field.order();
    let phi = field.degree();
    // canonical forms of zeta^t, used to spot values that are a multiple of one root
    let roots: Vec<Vec<i128>> = (0..order)
        .map(|t| {
            let z = CycloRational::zeta_pow(field, t as i64);
            z.coeffs().iter().map(|c| i128::try_from(c).expect("small coefficient")).collect()
        })
        .collect();
    let mut out = Vec::new();
    for idx in 0..mu.len() {
        let v = mu.nums_at(idx);
        let nnz = v.iter().filter(|&&x| x != 0).count();
        if nnz == 0 {
            continue;
        }
        if nnz > 1 {
            let i0 = v.iter().position(|&x| x != 0).unwrap();
            let hit = (phi..order).find_map(|t| {
                let r = &roots[t];
                if r[i0] == 0 {
                    return None;
                }
                let c = v[i0] * r[i0];
                v.iter().zip(r).all(|(&a, &b)| a == c * b).then_some((t, c))
            });
            if let Some((t, c)) = hit {
                out.push((idx as u32, t as u32, c));
                continue;
            }
        }
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                out.push((idx as u32, i as u32, c));
            }
        }
    }
    out
}

fn l1(terms: &[(u32, u32, i128)]) -> u128 {
    terms.iter().map(|t| t.2.unsigned_abs()).sum()
}

trait Acc: Copy + Default + Send + Sync + AddAssign + Mul<Output = Self> + TryFrom<i128> + Into<i128> {}
impl Acc for i64 {}
impl Acc for i128 {}

fn accumulate<T: Acc>(
    ctx: &QuotientContext,
    side: Side,
    a: &[(u32, u32, i128)],
    b: &[(u32, u32, i128)],
) -> Vec<i128> {
    let size = ctx.size();
    let order = ctx.field().order();
    let conv = |v: i128| T::try_from(v).ok().expect("bounded by the l1 check");
    let a: Vec<(u32, u32, T)> = a.iter().map(|&(i, e, c)| (i, e, conv(c))).collect();
    let b: Vec<(u32, u32, T)> = b.iter().map(|&(i, e, c)| (i, e, conv(c))).collect();
    let table = match side {
        Side::Group => ctx.mul_table(),
        _ => None,
    };
    let chunk = (a.len() / (4 * rayon::current_num_threads().max(1))).max(1);
    let wide = a
        .par_chunks(chunk)
        .fold(
            || vec![T::default(); size * order],
            |mut acc, part| {
                for &(h, ea, ca) in part {
                    let h = h as usize;
                    let row = table.map(|t| &t[h * size..(h + 1) * size]);
                    for &(k, eb, cb) in &b {
                        let target = match (row, side) {
                            (Some(row), _) => row[k as usize] as usize,
                            (None, Side::Group) => ctx.mul(h, k as usize),
                            (None, _) => ctx.add(h, k as usize),
                        };
                        let mut e = (ea + eb) as usize;
                        if e >= order {
                            e -= order;
                        }
                        acc[target * order + e] += ca * cb;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![T::default(); size * order],
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(y) {
                    *a += b;
                }
                x
            },
        );
    wide.into_iter().map(Into::into).collect()
}

/// `(a * b)(g) = sum_h a(h) b(h^{-1} g)`; on the lie side `h^{-1} g` is `g - h`.
pub fn convolve(ctx: &QuotientContext, a: &Measure, b: &Measure) -> Result<Measure> {
    a.same_quotient(b)?;
    let side = a.side();
    if side == Side::Dual {
        return Err(Error::QuotientMismatch("convolution is defined on the group and lie sides".into()));
    }
    a.check_context(ctx, side)?;
    let ta = sparse_terms(ctx, a);
    let tb = sparse_terms(ctx, b);
    let den = a.den().checked_mul(b.den()).ok_or(Error::Overflow)?;
    let bound = l1(&ta).checked_mul(l1(&tb)).ok_or(Error::Overflow)?;
    let wide = if bound < 1 << 62 {
        accumulate::<i64>(ctx, side, &ta, &tb)
    } else if bound < 1 << 126 {
        accumulate::<i128>(ctx, side, &ta, &tb)
    } else {
        return Err(Error::Overflow);
    };
    Measure::from_wide(ctx, side, wide, den)
}

/// `(delta_g * mu)(x) = mu(g^{-1} x)` on the group side.
pub fn translate(ctx: &QuotientContext, g: usize, mu: &Measure) -> Result<Measure> {
    mu.check_context(ctx, Side::Group)?;
    let phi = mu.phi();
    let mut nums = vec![0i128; mu.nums().len()];
    for y in 0..ctx.size() {
        let t = ctx.mul(g, y);
        nums[t * phi..(t + 1) * phi].copy_from_slice(mu.nums_at(y));
    }
    Measure::from_parts(ctx, Side::Group, nums, mu.den())
}

/// `(exp^* mu)(x) = mu(exp x)`.
pub fn exp_pullback(ctx: &QuotientContext, mu: &Measure) -> Result<Measure> {
    mu.check_context(ctx, Side::Group)?;
    let mut nums = Vec::with_capacity(mu.nums().len());
    for x in 0..ctx.size() {
        nums.extend_from_slice(mu.nums_at(ctx.exp_of(x)));
    }
    Measure::from_parts(ctx, Side::Lie, nums, mu.den())
}

fn transpose_perm(ctx: &QuotientContext) -> Vec<usize> {
    let n = ctx.session().n;
    (0..ctx.size())
        .map(|i| {
            let c = ctx.coords(i);
            let t: Vec<u64> = (0..n * n).map(|pos| c[(pos % n) * n + pos / n]).collect();
            ctx.index(&t)
        })
        .collect()
}

/// In-place `g(w) = sum_v f(v) zeta^{<w, v>}` over `(Z/p^m)^{n^2}` with the
/// dot product of coordinate vectors.
fn dft(ctx: &QuotientContext, wide: &mut [i128]) {
    let order = ctx.field().order();
    let base = ctx.base() as usize;
    let size = ctx.size();
    let mut stride = size;
    for _ in 0..ctx.dim() {
        stride /= base;
        let block = stride * base;
        let mut fiber = vec![0i128; base * order];
        for start in (0..size).step_by(block) {
            for inner in 0..stride {
                fiber.iter_mut().for_each(|x| *x = 0);
                for w in 0..base {
                    let dst = &mut fiber[w * order..(w + 1) * order];
                    for v in 0..base {
                        let src = (start + v * stride + inner) * order;
                        let rot = (w * v) % order;
                        for t in 0..order {
                            let c = wide[src + t];
                            if c != 0 {
                                let mut s = t + rot;
                                if s >= order {
                                    s -= order;
                                }
                                dst[s] += c;
                            }
                        }
                    }
                }
                for w in 0..base {
                    let dst = (start + w * stride + inner) * order;
                    wide[dst..dst + order].copy_from_slice(&fiber[w * order..(w + 1) * order]);
                }
            }
        }
    }
}

fn check_fourier_bound(ctx: &QuotientContext, mu: &Measure) -> Result<()> {
    let total: u128 = mu.nums().iter().map(|x| x.unsigned_abs()).sum();
    match total.checked_mul(ctx.size() as u128) {
        Some(b) if b < 1 << 126 => Ok(()),
        _ => Err(Error::Overflow),
    }
}

/// `F(f)(x) = |L/L_m|^{-1} sum_y f(y) psi(<x, y>)`, dual side to lie side.
pub fn fourier(ctx: &QuotientContext, f: &Measure) -> Result<Measure> {
    f.check_context(ctx, Side::Dual)?;
    check_fourier_bound(ctx, f)?;
    let order = ctx.field().order();
    let phi = f.phi();
    let perm = transpose_perm(ctx);
    let mut wide = vec![0i128; ctx.size() * order];
    for y in 0..ctx.size() {
        let w = perm[y];
        wide[w * order..w * order + phi].copy_from_slice(f.nums_at(y));
    }
    dft(ctx, &mut wide);
    let den = f.den().checked_mul(ctx.size() as i128).ok_or(Error::Overflow)?;
    Measure::from_wide(ctx, Side::Lie, wide, den)
}

/// `F'(g)(y) = sum_x g(x) psi(<x, y>)`, lie side to dual side; `F' F f = f(-.)`.
pub fn fourier_companion(ctx: &QuotientContext, g: &Measure) -> Result<Measure> {
    g.check_context(ctx, Side::Lie)?;
    check_fourier_bound(ctx, g)?;
    let order = ctx.field().order();
    let phi = g.phi();
    let mut wide = vec![0i128; ctx.size() * order];
    for x in 0..ctx.size() {
        wide[x * order..x * order + phi].copy_from_slice(g.nums_at(x));
    }
    dft(ctx, &mut wide);
    let perm = transpose_perm(ctx);
    let mut out = vec![0i128; wide.len()];
    for w in 0..ctx.size() {
        let y = perm[w];
        out[y * order..(y + 1) * order].copy_from_slice(&wide[w * order..(w + 1) * order]);
    }
    Measure::from_wide(ctx, Side::Dual, out, g.den())
}

/// Precomputed data for `nu -> e_B * nu`.
#[derive(Debug, Clone)]
pub struct Projector {
    members: Vec<usize>,
    exps: Vec<u32>,
    reps: Vec<usize>,
    vanishes: bool,
}

impl Projector {
    pub fn new(ctx: &QuotientContext, ball: &Ball) -> Result<Self> {
        ball.check_session(ctx.session())?;
        let r = ball.r_exp();
        if ball.center().k() > ctx.level() {
            return Ok(Projector { members: Vec::new(), exps: Vec::new(), reps: Vec::new(), vanishes: true });
        }
        Ok(Projector {
            members: ctx.level_members(r),
            exps: ctx.eta_exponents(ball.center(), r)?,
            reps: ctx.coset_reps(r),
            vanishes: false,
        })
    }

    /// `e_B * nu`, using `(e_B * nu)(h s) = eta(h) / |H| sum_{h'} eta(h')^{-1} nu(h' s)`
    /// over `H = K_B / K_m` and coset representatives `s`.
    pub fn apply(&self, ctx: &QuotientContext, nu: &Measure) -> Result<Measure> {
        nu.check_context(ctx, Side::Group)?;
        if self.vanishes {
            return Ok(Measure::zero(ctx, Side::Group));
        }
        let total: u128 = nu.nums().iter().map(|x| x.unsigned_abs()).sum();
        if total >= 1 << 120 {
            return Err(Error::Overflow);
        }
        let order = ctx.field().order();
        let phi = nu.phi();
        let blocks: Vec<Vec<(usize, Vec<i128>)>> = self
            .reps
            .par_iter()
            .map(|&s| {
                let mut acc = vec![0i128; order];
                for (&h, &t) in self.members.iter().zip(&self.exps) {
                    let v = nu.nums_at(ctx.mul(h, s));
                    let shift = order - t as usize;
                    for (i, &c) in v.iter().enumerate().take(phi) {
                        if c != 0 {
                            acc[(i + shift) % order] += c;
                        }
                    }
                }
                if acc.iter().all(|&c| c == 0) {
                    return Vec::new();
                }
                self.members
                    .iter()
                    .zip(&self.exps)
                    .map(|(&h, &t)| {
                        let mut out = vec![0i128; order];
                        for (j, &c) in acc.iter().enumerate() {
                            out[(j + t as usize) % order] = c;
                        }
                        (ctx.mul(h, s), out)
                    })
                    .collect()
            })
            .collect();
        let mut wide = vec![0i128; ctx.size() * order];
        for (target, vals) in blocks.into_iter().flatten() {
            wide[target * order..(target + 1) * order].copy_from_slice(&vals);
        }
        let den = nu.den().checked_mul(self.members.len() as i128).ok_or(Error::Overflow)?;
        Measure::from_wide(ctx, Side::Group, wide, den)
    }
}

/// `e_B * nu` on the group side.
pub fn project(ctx: &QuotientContext, ball: &Ball, nu: &Measure) -> Result<Measure> {
    Projector::new(ctx, ball)?.apply(ctx, nu)
}
