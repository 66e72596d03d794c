//! Hard-coded evaluators for the closed forms `f_1` through `f_4`.
//!
//! Each evaluator is straight-line: it computes `a^((n+1)/2)` and the chain
//! `a^n, a^(2n), ..., a^(2^(k-1) n)` once (the last power doubles as the
//! Euler-criterion screen), then evaluates every bracketed term of the
//! product form, including the ones that vanish. The multiplication count
//! therefore depends on `p` only, never on `a`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modarith::{MulCounter, PrimeContext};
use crate::{oracles, synthesis};

/// Which algorithm produced a root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Method {
    F1,
    F2,
    F3,
    F4,
    Synth,
    Tonelli,
    Brute,
    Direct,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::F1,
        Method::F2,
        Method::F3,
        Method::F4,
        Method::Synth,
        Method::Tonelli,
        Method::Brute,
        Method::Direct,
    ];

    /// The 2-adicity a hard-coded formula is restricted to, if any.
    pub fn required_k(self) -> Option<u32> {
        match self {
            Method::F1 => Some(1),
            Method::F2 => Some(2),
            Method::F3 => Some(3),
            Method::F4 => Some(4),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::F1 => "f1",
            Method::F2 => "f2",
            Method::F3 => "f3",
            Method::F4 => "f4",
            Method::Synth => "synth",
            Method::Tonelli => "tonelli",
            Method::Brute => "brute",
            Method::Direct => "direct",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A square root of `a` together with its negation and the work it took.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqrtOutcome {
    /// `min(r, p - r)`.
    pub root: u64,
    /// `p - root`, or 0 when the root is 0.
    pub coroot: u64,
    pub method: Method,
    pub mul_count: u64,
}

impl SqrtOutcome {
    /// Canonicalizes either of the two roots `±raw`.
    pub fn from_raw(raw: u64, p: u64, method: Method, mul_count: u64) -> Self {
        let other = if raw == 0 { 0 } else { p - raw };
        Self {
            root: raw.min(other),
            coroot: raw.max(other),
            method,
            mul_count,
        }
    }

    pub fn roots(&self) -> [u64; 2] {
        [self.root, self.coroot]
    }
}

/// Powers of `a` shared by every closed-form evaluator.
#[derive(Debug, Clone)]
pub(crate) struct ResiduePowers {
    /// `a^((n+1)/2)`.
    pub half: u64,
    /// `a^(2^j n)` for `j` in `0..k-1`.
    pub levels: Vec<u64>,
}

/// Computes `a^((n+1)/2)` and the level powers, screening `a` with Euler's
/// criterion along the way (`a^((p-1)/2) = (a^n)^(2^(k-1))`).
pub(crate) fn residue_powers(
    ctx: &PrimeContext,
    a: u64,
    counter: &mut MulCounter,
) -> Result<ResiduePowers> {
    ctx.check_range(a)?;
    let n = ctx.odd_part();
    let k = ctx.two_adicity();
    let low = counter.pow(a, (n - 1) / 2);
    let half = counter.mul(low, a);
    let mut cur = counter.mul(half, low);
    let mut levels = Vec::with_capacity(k as usize - 1);
    for _ in 0..k - 1 {
        levels.push(cur);
        cur = counter.square(cur);
    }
    if a != 0 && cur != 1 {
        return Err(Error::NotAResidue { a, p: ctx.p() });
    }
    Ok(ResiduePowers { half, levels })
}

/// `2^-(k-1) mod p` by repeated multiplication of `(p+1)/2`.
pub(crate) fn inverse_two_power(ctx: &PrimeContext, k: u32, counter: &mut MulCounter) -> u64 {
    let half = ctx.p().div_ceil(2);
    let mut acc = 1;
    for i in 0..k.saturating_sub(1) {
        acc = if i == 0 { half } else { counter.mul(acc, half) };
    }
    acc
}

fn require_k(ctx: &PrimeContext, expected: u32) -> Result<()> {
    if ctx.two_adicity() != expected {
        return Err(Error::WrongClass {
            expected,
            actual: ctx.two_adicity(),
            p: ctx.p(),
        });
    }
    Ok(())
}

/// `1 + x * zj`.
#[inline]
fn plus(c: &mut MulCounter, x: u64, zj: u64) -> u64 {
    let t = c.mul(x, zj);
    c.add(1, t)
}

/// `1 - x * zj`.
#[inline]
fn minus(c: &mut MulCounter, x: u64, zj: u64) -> u64 {
    let t = c.mul(x, zj);
    c.sub(1, t)
}

/// `f_1(x) = x^((n+1)/2)` for `p = 2n + 1`, `n` odd.
pub fn sqrt_f1(ctx: &PrimeContext, a: u64) -> Result<SqrtOutcome> {
    require_k(ctx, 1)?;
    let mut c = MulCounter::new(ctx.p());
    let pw = residue_powers(ctx, a, &mut c)?;
    Ok(SqrtOutcome::from_raw(pw.half, ctx.p(), Method::F1, c.count()))
}

/// `f_2(x) = 2^-1 x^((n+1)/2) [z^n (1 - x^n) + (1 + x^n)]` for `p = 4n + 1`.
pub fn sqrt_f2(ctx: &PrimeContext, a: u64) -> Result<SqrtOutcome> {
    require_k(ctx, 2)?;
    f2_with_multiplier(ctx, a, ctx.z_pow_n(1))
}

/// `f_2` with the literal base 2 in place of `z`, i.e. multiplier `2^n`.
#[cfg(test)]
pub(crate) fn sqrt_f2_literal_two(ctx: &PrimeContext, a: u64) -> Result<SqrtOutcome> {
    require_k(ctx, 2)?;
    let two_n = crate::modarith::mod_pow(2, ctx.odd_part(), ctx.p());
    f2_with_multiplier(ctx, a, two_n)
}

fn f2_with_multiplier(ctx: &PrimeContext, a: u64, zn: u64) -> Result<SqrtOutcome> {
    let mut c = MulCounter::new(ctx.p());
    let pw = residue_powers(ctx, a, &mut c)?;
    let xn = pw.levels[0];
    let t1 = c.mul(zn, c.sub(1, xn));
    let t0 = c.add(1, xn);
    let bracket = c.add(t1, t0);
    let half = inverse_two_power(ctx, 2, &mut c);
    let pre = c.mul(half, pw.half);
    let raw = c.mul(pre, bracket);
    Ok(SqrtOutcome::from_raw(raw, ctx.p(), Method::F2, c.count()))
}

/// The four bracketed terms of `f_3`, in printed order.
pub(crate) fn f3_terms(ctx: &PrimeContext, levels: &[u64], c: &mut MulCounter) -> [u64; 4] {
    let z = |j| ctx.z_pow_n(j);
    let (x1, x2) = (levels[0], levels[1]);
    let one_minus_x2 = c.sub(1, x2);
    let one_plus_x2 = c.add(1, x2);

    // z^3n (1 - x^2n)(1 - x^n z^2n)
    let f = minus(c, x1, z(2));
    let t = c.mul(one_minus_x2, f);
    let t3 = c.mul(z(3), t);
    // z^n (1 - x^2n)(1 + x^n z^2n)
    let f = plus(c, x1, z(2));
    let t = c.mul(one_minus_x2, f);
    let t1 = c.mul(z(1), t);
    // z^2n (1 + x^2n)(1 - x^n)
    let t = c.mul(one_plus_x2, c.sub(1, x1));
    let t2 = c.mul(z(2), t);
    // (1 + x^2n)(1 + x^n)
    let t0 = c.mul(one_plus_x2, c.add(1, x1));
    [t3, t1, t2, t0]
}

/// `f_3` for `p = 8n + 1`: a four-term selector sum scaled by `2^-2 x^((n+1)/2)`.
pub fn sqrt_f3(ctx: &PrimeContext, a: u64) -> Result<SqrtOutcome> {
    require_k(ctx, 3)?;
    let mut c = MulCounter::new(ctx.p());
    let pw = residue_powers(ctx, a, &mut c)?;
    let terms = f3_terms(ctx, &pw.levels, &mut c);
    let bracket = terms.iter().fold(0, |acc, &t| c.add(acc, t));
    let inv = inverse_two_power(ctx, 3, &mut c);
    let pre = c.mul(inv, pw.half);
    let raw = c.mul(pre, bracket);
    Ok(SqrtOutcome::from_raw(raw, ctx.p(), Method::F3, c.count()))
}

/// The eight bracketed terms of `f_4`, in printed order.
pub(crate) fn f4_terms(ctx: &PrimeContext, levels: &[u64], c: &mut MulCounter) -> [u64; 8] {
    let z = |j| ctx.z_pow_n(j);
    let (x1, x2, x4) = (levels[0], levels[1], levels[2]);
    let m4 = c.sub(1, x4);
    let p4 = c.add(1, x4);

    // z^7n (1 - x^4n)(1 - x^2n z^4n)(1 - x^n z^6n)
    let f2 = minus(c, x2, z(4));
    let f1 = minus(c, x1, z(6));
    let t = c.mul(m4, f2);
    let t = c.mul(t, f1);
    let t7 = c.mul(z(7), t);
    // z^5n (1 - x^4n)(1 - x^n z^2n)(1 + x^2n z^4n)
    let f1 = minus(c, x1, z(2));
    let f2 = plus(c, x2, z(4));
    let t = c.mul(m4, f1);
    let t = c.mul(t, f2);
    let t5 = c.mul(z(5), t);
    // z^3n (1 - x^4n)(1 - x^2n z^4n)(1 + x^n z^6n)
    let f2 = minus(c, x2, z(4));
    let f1 = plus(c, x1, z(6));
    let t = c.mul(m4, f2);
    let t = c.mul(t, f1);
    let t3 = c.mul(z(3), t);
    // z^n (1 - x^4n)(1 + x^n z^2n)(1 + x^2n z^4n)
    let f1 = plus(c, x1, z(2));
    let f2 = plus(c, x2, z(4));
    let t = c.mul(m4, f1);
    let t = c.mul(t, f2);
    let t1 = c.mul(z(1), t);
    // z^6n (1 + x^4n)(1 - x^2n)(1 - x^n z^4n)
    let f1 = minus(c, x1, z(4));
    let t = c.mul(p4, c.sub(1, x2));
    let t = c.mul(t, f1);
    let t6 = c.mul(z(6), t);
    // z^2n (1 + x^4n)(1 - x^2n)(1 + x^n z^4n)
    let f1 = plus(c, x1, z(4));
    let t = c.mul(p4, c.sub(1, x2));
    let t = c.mul(t, f1);
    let t2 = c.mul(z(2), t);
    // z^4n (1 + x^4n)(1 + x^2n)(1 - x^n)
    let t = c.mul(p4, c.add(1, x2));
    let t = c.mul(t, c.sub(1, x1));
    let t4 = c.mul(z(4), t);
    // (1 + x^4n)(1 + x^2n)(1 + x^n)
    let t = c.mul(p4, c.add(1, x2));
    let t0 = c.mul(t, c.add(1, x1));
    [t7, t5, t3, t1, t6, t2, t4, t0]
}

/// `f_4` for `p = 16n + 1`: an eight-term selector sum scaled by `2^-3 x^((n+1)/2)`.
pub fn sqrt_f4(ctx: &PrimeContext, a: u64) -> Result<SqrtOutcome> {
    require_k(ctx, 4)?;
    let mut c = MulCounter::new(ctx.p());
    let pw = residue_powers(ctx, a, &mut c)?;
    let terms = f4_terms(ctx, &pw.levels, &mut c);
    let bracket = terms.iter().fold(0, |acc, &t| c.add(acc, t));
    let inv = inverse_two_power(ctx, 4, &mut c);
    let pre = c.mul(inv, pw.half);
    let raw = c.mul(pre, bracket);
    Ok(SqrtOutcome::from_raw(raw, ctx.p(), Method::F4, c.count()))
}

/// Picks the closed form for the context's class: `f_1`..`f_4` for `k <= 4`,
/// the synthesized formula for `5 <= k <= 16`, and the class-index direct
/// method beyond that.
pub fn sqrt_auto(ctx: &PrimeContext, a: u64) -> Result<SqrtOutcome> {
    match ctx.two_adicity() {
        1 => sqrt_f1(ctx, a),
        2 => sqrt_f2(ctx, a),
        3 => sqrt_f3(ctx, a),
        4 => sqrt_f4(ctx, a),
        k if k <= synthesis::MAX_K => synthesis::evaluate(synthesis::cached(k)?, ctx, a),
        _ => oracles::direct_sqrt(ctx, a),
    }
}

/// Runs the named method. `Synth` evaluates the synthesized formula for any
/// supported `k`, including `k <= 4`.
pub fn sqrt_with(method: Method, ctx: &PrimeContext, a: u64) -> Result<SqrtOutcome> {
    match method {
        Method::F1 => sqrt_f1(ctx, a),
        Method::F2 => sqrt_f2(ctx, a),
        Method::F3 => sqrt_f3(ctx, a),
        Method::F4 => sqrt_f4(ctx, a),
        Method::Synth => {
            let f = synthesis::cached(ctx.two_adicity())?;
            synthesis::evaluate(f, ctx, a)
        }
        Method::Tonelli => oracles::tonelli_shanks(ctx, a),
        Method::Direct => oracles::direct_sqrt(ctx, a),
        Method::Brute => oracles::brute_force_outcome(ctx, a),
    }
}
