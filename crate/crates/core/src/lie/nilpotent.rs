//! Does a dual coset `c + p^{-j} L^perp` meet the nilpotent cone?
//!
//! The cone is invariant under scaling, so the question is asked for the
//! integral coset `C + p^d gl_n(Z_p)` obtained by multiplying through by
//! `p^{k+e}` (`c = p^{-k-e} C`, `d = k - j`).
//!
//! For gl_2 the answer is decided exactly: a nilpotent 2x2 matrix is
//! `[[a, b], [c, -a]]` with `a^2 + bc = 0`, and after fixing the trace the
//! coset is a box `a0 + p^d Z_p` x `b0 + p^d Z_p` x `c0 + p^d Z_p`. On that
//! box the valuations of the non-integral coordinates are pinned, which
//! reduces solvability to a congruence on a single unit. Positive answers
//! carry an exact rational witness.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use super::{DualElement, ModMat};
use crate::padic::{inv_mod, SessionParams};

pub const DEFAULT_SEARCH_DEPTH: u32 = 3;

/// An exact nilpotent element of the coset, in actual dual coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilpotentCertificate {
    n: usize,
    entries: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NilpotencyOutcome {
    Yes(NilpotentCertificate),
    No,
    /// The search to this depth found residual solutions but no witness.
    Unknown(u32),
}

impl NilpotencyOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, NilpotencyOutcome::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, NilpotencyOutcome::No)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            NilpotencyOutcome::Yes(_) => "nilpotent",
            NilpotencyOutcome::No => "non-nilpotent",
            NilpotencyOutcome::Unknown(_) => "unknown",
        }
    }
}

impl NilpotentCertificate {
    /// Scaled integral witness `z = p^{-shift} * scaled`.
    fn from_scaled(n: usize, scaled: Vec<BigRational>, p: u64, shift: u32) -> Self {
        let f = BigRational::from_integer(BigInt::from(p).pow(shift));
        NilpotentCertificate { n, entries: scaled.into_iter().map(|x| x / &f).collect() }
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    /// Checks that the witness is exactly nilpotent and lies in
    /// `center + p^{-level} L^perp`.
    pub fn verify(&self, sp: &SessionParams, center: &DualElement, level: u32) -> bool {
        let n = self.n;
        if n != sp.n {
            return false;
        }
        let mut pw = self.entries.clone();
        for _ in 1..n {
            pw = rat_mat_mul(n, &pw, &self.entries);
        }
        if !pw.iter().all(Zero::is_zero) {
            return false;
        }
        // (z - c) * p^{level + e} must be p-integral
        let denom = BigRational::from_integer(BigInt::from(sp.p).pow(center.k() + sp.e));
        let scale = BigRational::from_integer(BigInt::from(sp.p).pow(level + sp.e));
        let p = BigInt::from(sp.p);
        self.entries.iter().enumerate().all(|(idx, z)| {
            let c = BigRational::from_integer(BigInt::from(center.matrix().data()[idx])) / &denom;
            let diff = (z - c) * &scale;
            !(diff.denom() % &p).is_zero()
        })
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<String>> = self.entries.chunks(self.n).map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        json!(rows)
    }
}

fn rat_mat_mul(n: usize, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); n * n];
    for i in 0..n {
        for l in 0..n {
            let x = &a[i * n + l];
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * &b[l * n + j];
            }
        }
    }
    out
}

/// Decides whether `center + p^{-level} L^perp` contains a nilpotent element.
///
/// Exact for n <= 2. For n >= 3, `No` is certified by the absence of
/// residual solutions of `X^n = 0 mod p^depth`, `Yes` by an integral lift
/// that is exactly nilpotent, and anything else is `Unknown(depth)`.
pub fn nilpotent_in_coset(sp: &SessionParams, center: &DualElement, level: u32, depth: u32) -> NilpotencyOutcome {
    let n = sp.n;
    let k = center.k();
    if k <= level {
        // zero lies in the coset
        return NilpotencyOutcome::Yes(NilpotentCertificate { n, entries: vec![BigRational::zero(); n * n] });
    }
    let d = k - level;
    let shift = k + sp.e;
    let c: Vec<BigInt> = center.matrix().data().iter().map(|&x| BigInt::from(x)).collect();
    match n {
        1 => NilpotencyOutcome::No,
        2 => decide_gl2(sp.p, d, &c, shift),
        _ => search(sp, d, center.matrix(), shift, depth.max(d)),
    }
}

fn vp_capped(x: &BigInt, p: u64, cap: u32) -> u32 {
    let p = BigInt::from(p);
    let modulus = p.pow(cap);
    let mut r = ((x % &modulus) + &modulus) % &modulus;
    if r.is_zero() {
        return cap;
    }
    let mut v = 0;
    while (&r % &p).is_zero() {
        r /= &p;
        v += 1;
    }
    v
}

fn unit_part(x: &BigInt, p: u64) -> BigInt {
    let p = BigInt::from(p);
    let mut r = x.clone();
    while (&r % &p).is_zero() && !r.is_zero() {
        r /= &p;
    }
    r
}

fn decide_gl2(p: u64, d: u32, c: &[BigInt], shift: u32) -> NilpotencyOutcome {
    let pd = BigInt::from(p).pow(d);
    let trace = &c[0] + &c[3];
    if !(&trace % &pd).is_zero() {
        return NilpotencyOutcome::No;
    }
    let (a0, b0, c0) = (&c[0], &c[1], &c[2]);
    let alpha = vp_capped(a0, p, d);
    let beta = vp_capped(b0, p, d);
    let gamma = vp_capped(c0, p, d);
    let r = |x: &BigInt| BigRational::from_integer(x.clone());
    let zero = BigRational::zero();
    let yes = |m: [BigRational; 4]| NilpotencyOutcome::Yes(NilpotentCertificate::from_scaled(2, m.to_vec(), p, shift));
    // [[a, b], [-a^2/b, -a]]
    let solve_c = || yes([r(a0), r(b0), -(r(a0) * r(a0)) / r(b0), -r(a0)]);
    // [[a, -a^2/c], [c, -a]]
    let solve_b = || yes([r(a0), -(r(a0) * r(a0)) / r(c0), r(c0), -r(a0)]);

    match (beta >= d, gamma >= d) {
        (true, true) => {
            if alpha >= d {
                yes([zero.clone(), zero.clone(), zero.clone(), zero])
            } else {
                NilpotencyOutcome::No
            }
        }
        (true, false) => {
            if alpha >= d {
                yes([zero.clone(), zero.clone(), r(c0), zero])
            } else if 2 * alpha >= gamma + d {
                solve_b()
            } else {
                NilpotencyOutcome::No
            }
        }
        (false, true) => {
            if alpha >= d {
                yes([zero.clone(), r(b0), zero.clone(), zero])
            } else if 2 * alpha >= beta + d {
                solve_c()
            } else {
                NilpotencyOutcome::No
            }
        }
        (false, false) => {
            if alpha >= d || 2 * alpha != beta + gamma {
                return NilpotencyOutcome::No;
            }
            // units are pinned modulo p^mu; need -b c / a^2 = 1 mod p^mu
            let mu = (d - beta).min(d - gamma);
            let pm = p.pow(mu);
            let red = |x: &BigInt| -> u64 {
                let m = BigInt::from(pm);
                let r = ((unit_part(x, p) % &m) + &m) % &m;
                u64::try_from(r).unwrap()
            };
            let (ua, ub, uc) = (red(a0), red(b0), red(c0));
            let ua2 = (ua as u128 * ua as u128 % pm as u128) as u64;
            let inv = inv_mod(ua2, pm).expect("unit");
            let w = (pm as u128 - (ub as u128 * uc as u128 % pm as u128) * inv as u128 % pm as u128) % pm as u128;
            if w as u64 != 1 % pm {
                return NilpotencyOutcome::No;
            }
            if gamma >= beta {
                solve_c()
            } else {
                solve_b()
            }
        }
    }
}

/// Residual search for n >= 3 on `C + p^d M`: lifts the residues with
/// `X^n = 0 mod p^j` one digit at a time up to `p^depth`.
fn search(sp: &SessionParams, d: u32, c: &ModMat, shift: u32, depth: u32) -> NilpotencyOutcome {
    const MAX_FRONTIER: usize = 1 << 16;
    let n = sp.n;
    let p = sp.p;
    let nilpotent_mod = |x: &ModMat| {
        let mut pw = x.clone();
        for _ in 1..n {
            pw = pw.mul(x);
        }
        pw.is_zero()
    };
    let start = c.with_modulus(p.pow(d));
    if !nilpotent_mod(&start) {
        return NilpotencyOutcome::No;
    }
    let mut frontier = vec![start];
    for j in d..depth {
        if let Some(cert) = frontier.iter().find_map(|x| exact_lift(p, n, x, shift)) {
            return NilpotencyOutcome::Yes(cert);
        }
        let lifted_mod = p.pow(j + 1);
        let pj = p.pow(j);
        let lifts = p.pow((n * n) as u32);
        let mut next = Vec::new();
        for x in &frontier {
            let base = x.with_modulus(lifted_mod);
            for idx in 0..lifts {
                let mut y = base.clone();
                let mut t = idx;
                for pos in 0..n * n {
                    let digit = t % p;
                    t /= p;
                    y.set(pos / n, pos % n, base.get(pos / n, pos % n) + digit * pj);
                }
                if nilpotent_mod(&y) {
                    next.push(y);
                    if next.len() > MAX_FRONTIER {
                        return NilpotencyOutcome::Unknown(j + 1);
                    }
                }
            }
        }
        if next.is_empty() {
            return NilpotencyOutcome::No;
        }
        frontier = next;
    }
    for x in &frontier {
        if let Some(cert) = exact_lift(p, n, x, shift) {
            return NilpotencyOutcome::Yes(cert);
        }
    }
    NilpotencyOutcome::Unknown(depth)
}

fn exact_lift(p: u64, n: usize, x: &ModMat, shift: u32) -> Option<NilpotentCertificate> {
    let md = x.modulus() as i128;
    let lifted: Vec<i128> = x.data().iter().map(|&v| if (v as i128) * 2 > md { v as i128 - md } else { v as i128 }).collect();
    let mut pw = lifted.clone();
    for _ in 1..n {
        let mut out = vec![0i128; n * n];
        for i in 0..n {
            for l in 0..n {
                for j in 0..n {
                    out[i * n + j] = out[i * n + j].checked_add(pw[i * n + l].checked_mul(lifted[l * n + j])?)?;
                }
            }
        }
        pw = out;
    }
    if pw.iter().any(|&v| v != 0) {
        return None;
    }
    let scaled = lifted.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect();
    Some(NilpotentCertificate::from_scaled(n, scaled, p, shift))
}
