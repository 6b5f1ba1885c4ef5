//! Brute-force reference computations used to cross-check the fast paths.

use crate::balls::Ball;
use crate::error::{Error, Result};
use crate::padic::{CycloRational, SessionParams};
use crate::quotient::{Measure, QuotientContext, Side};

/// Whether the ball `p^{-k-e} C + p^{-r-e} M` meets the nilpotent cone, by
/// enumerating residues mod `p^depth`.
///
/// The ball meets the cone iff some integral nilpotent `N` has
/// `N = C mod p^{k-r}`. For `n = 1` the only nilpotent is 0. For `n = 2` every
/// integral nilpotent is `lambda [[-xy, x^2], [-y^2, xy]]`, so it suffices to
/// run `lambda, x, y` over residues mod `p^depth` once `depth >= k - r`.
pub fn nilpotent_ball_bruteforce(sp: &SessionParams, ball: &Ball, depth: u32) -> Result<bool> {
    let c = ball.center();
    let d = c.k() - ball.r_exp();
    let modulus = sp.pow(d);
    let cm: Vec<u64> = c.matrix().data().iter().map(|&v| v % modulus).collect();
    match sp.n {
        1 => Ok(cm[0] == 0),
        2 => {
            if depth < d {
                return Err(Error::InvalidParams(format!("depth {depth} is below k - r = {d}")));
            }
            let big = sp.pow(depth);
            let md = modulus as i128;
            let red = |v: i128| v.rem_euclid(md) as u64;
            for lambda in 0..big as i128 {
                for x in 0..big as i128 {
                    for y in 0..big as i128 {
                        let n = [red(-lambda * x * y), red(lambda * x * x), red(-lambda * y * y), red(lambda * x * y)];
                        if n[..] == cm[..] {
                            return Ok(true);
                        }
                    }
                }
            }
            Ok(false)
        }
        n => Err(Error::InvalidParams(format!("no brute-force oracle for n = {n}"))),
    }
}

/// `F(f)(x) = |Q|^{-1} sum_y f(y) psi(<x, y>)` by the defining double sum.
pub fn naive_fourier(ctx: &QuotientContext, f: &Measure) -> Result<Measure> {
    if f.side() != Side::Dual {
        return Err(Error::QuotientMismatch("expected a measure on the dual side".into()));
    }
    let field = ctx.field();
    let base = ctx.base();
    let support = f.support();
    let size = ctx.size() as i64;
    Measure::from_fn(ctx, Side::Lie, |x| {
        let xc = ctx.coords(x);
        let mut acc = CycloRational::zero(field);
        for &y in &support {
            let yc = ctx.coords(y);
            let t = trace_product(&xc, &yc, ctx.session().n, base);
            acc = acc.add(&f.value(y).mul(&CycloRational::zeta_pow(field, t as i64)));
        }
        acc.mul(&CycloRational::from_rational(field, 1, size))
    })
}

fn trace_product(x: &[u64], y: &[u64], n: usize, base: u64) -> u64 {
    let mut t = 0u128;
    for i in 0..n {
        for j in 0..n {
            t += x[i * n + j] as u128 * y[j * n + i] as u128;
        }
    }
    (t % base as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balls::enumerate_balls;
    use crate::lie::{DualElement, ModMat};

    #[test]
    fn gl2_examples() {
        let sp = SessionParams::new(3, 2, 1, 2).unwrap();
        let ball = |k: u32, r: u32, v: &[i64]| {
            Ball::new(&sp, DualElement::new(&sp, k, ModMat::from_i64(2, sp.modulus(), v)), r).unwrap()
        };
        // the ball of diag(1, 0) at |c| = q is not nilpotent, the one of [[0,1],[0,0]] is
        assert!(!nilpotent_ball_bruteforce(&sp, &ball(1, 0, &[1, 0, 0, 0]), 3).unwrap());
        assert!(nilpotent_ball_bruteforce(&sp, &ball(1, 0, &[0, 1, 0, 0]), 3).unwrap());
        assert!(nilpotent_ball_bruteforce(&sp, &Ball::base(&sp), 3).unwrap());
        let total = enumerate_balls(&sp, 2).iter().filter(|b| nilpotent_ball_bruteforce(&sp, b, 3).unwrap()).count();
        assert!(total > 1 && total < 161);
    }
}
