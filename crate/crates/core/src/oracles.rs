//! Independent square-root algorithms used as ground truth.
//!
//! None of these touch the closed forms: brute force enumerates, Tonelli-Shanks
//! iterates, and the direct method reads the root off the residue's class in
//! the 2-Sylow subgroup.

use crate::error::{Error, Result};
use crate::formulas::{Method, SqrtOutcome};
use crate::modarith::{is_prime, mul_mod, MulCounter, PrimeContext};

/// Largest modulus the enumeration oracles accept.
pub const BRUTE_FORCE_BOUND: u64 = 1 << 20;

fn check_exhaustible(p: u64) -> Result<()> {
    if p > BRUTE_FORCE_BOUND {
        return Err(Error::ExhaustionBound { p, bound: BRUTE_FORCE_BOUND });
    }
    Ok(())
}

/// Every `r` in `[0, p)` with `r^2 = a`, ascending.
pub fn brute_force_sqrt(p: u64, a: u64) -> Result<Vec<u64>> {
    check_exhaustible(p)?;
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if a >= p {
        return Err(Error::OutOfRange { value: a, p });
    }
    Ok((0..p).filter(|&r| mul_mod(r, r, p) == a).collect())
}

/// Brute force reported as a [`SqrtOutcome`]; one multiplication per candidate.
pub fn brute_force_outcome(ctx: &PrimeContext, a: u64) -> Result<SqrtOutcome> {
    let roots = brute_force_sqrt(ctx.p(), a)?;
    match roots.first() {
        Some(&r) => Ok(SqrtOutcome::from_raw(r, ctx.p(), Method::Brute, ctx.p())),
        None => Err(Error::NotAResidue { a, p: ctx.p() }),
    }
}

/// All square roots mod `p`, tabulated by squaring every element once.
#[derive(Debug, Clone)]
pub struct SquareTable {
    p: u64,
    /// `roots[a]` is the smaller root of `a`, or `u64::MAX` for nonresidues.
    smaller_root: Vec<u64>,
}

impl SquareTable {
    pub fn new(p: u64) -> Result<Self> {
        check_exhaustible(p)?;
        let mut smaller_root = vec![u64::MAX; p as usize];
        for r in 0..=p / 2 {
            smaller_root[mul_mod(r, r, p) as usize] = r;
        }
        Ok(Self { p, smaller_root })
    }

    /// Same set as [`brute_force_sqrt`].
    pub fn roots(&self, a: u64) -> Vec<u64> {
        match self.smaller_root.get(a as usize) {
            Some(&u64::MAX) | None => vec![],
            Some(&0) => vec![0],
            Some(&r) => vec![r, self.p - r],
        }
    }
}

/// A Tonelli-Shanks result with its refinement-loop iteration count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TonelliTrace {
    pub outcome: SqrtOutcome,
    pub iterations: u32,
}

pub fn tonelli_shanks(ctx: &PrimeContext, a: u64) -> Result<SqrtOutcome> {
    tonelli_shanks_traced(ctx, a).map(|t| t.outcome)
}

/// Tonelli-Shanks using the context's nonresidue. Nonresidues are detected
/// when the order search reaches the full 2-Sylow order.
pub fn tonelli_shanks_traced(ctx: &PrimeContext, a: u64) -> Result<TonelliTrace> {
    ctx.check_range(a)?;
    let p = ctx.p();
    if a == 0 {
        return Ok(TonelliTrace {
            outcome: SqrtOutcome::from_raw(0, p, Method::Tonelli, 0),
            iterations: 0,
        });
    }
    let mut c = MulCounter::new(p);
    let n = ctx.odd_part();
    let low = c.pow(a, (n - 1) / 2);
    let mut root = c.mul(low, a); // a^((n+1)/2)
    let mut t = c.mul(root, low); // a^n
    let mut gen = ctx.sylow_generator();
    let mut m = ctx.two_adicity();
    let mut iterations = 0;
    while t != 1 {
        let mut i = 0;
        let mut probe = t;
        while probe != 1 {
            if i + 1 >= m {
                return Err(Error::NotAResidue { a, p });
            }
            probe = c.square(probe);
            i += 1;
        }
        let mut b = gen;
        for _ in 0..m - i - 1 {
            b = c.square(b);
        }
        root = c.mul(root, b);
        gen = c.square(b);
        t = c.mul(t, gen);
        m = i;
        iterations += 1;
    }
    Ok(TonelliTrace {
        outcome: SqrtOutcome::from_raw(root, p, Method::Tonelli, c.count()),
        iterations,
    })
}

/// `a^n`, screened: errors unless `a` is a nonzero quadratic residue.
fn odd_power(ctx: &PrimeContext, a: u64, c: &mut MulCounter) -> Result<u64> {
    ctx.check_range(a)?;
    let y = c.pow(a, ctx.odd_part());
    let mut probe = y;
    for _ in 0..ctx.two_adicity() - 1 {
        probe = c.square(probe);
    }
    if a == 0 || probe != 1 {
        return Err(Error::NotAResidue { a, p: ctx.p() });
    }
    Ok(y)
}

/// The unique `t` in `[0, 2^(k-1))` with `a^n = z^(2tn)`.
pub fn residue_class(ctx: &PrimeContext, a: u64) -> Result<u64> {
    if ctx.z_table().is_some() {
        residue_class_enumerate(ctx, a)
    } else {
        residue_class_lift(ctx, a)
    }
}

/// Class index by scanning all `2^(k-1)` candidates.
pub fn residue_class_enumerate(ctx: &PrimeContext, a: u64) -> Result<u64> {
    let mut c = MulCounter::new(ctx.p());
    let y = odd_power(ctx, a, &mut c)?;
    (0..ctx.class_count())
        .find(|&t| ctx.z_pow_n(2 * t) == y)
        .ok_or(Error::NoClass { a, p: ctx.p() })
}

/// Class index one bit at a time (Pohlig-Hellman in the 2-group generated by
/// `z^(2n)`, of order `2^(k-1)`).
pub fn residue_class_lift(ctx: &PrimeContext, a: u64) -> Result<u64> {
    let mut c = MulCounter::new(ctx.p());
    let y = odd_power(ctx, a, &mut c)?;
    let k = ctx.two_adicity();
    let mut t = 0u64;
    for bit in 0..k - 1 {
        // y * z^(-2tn) has all bits of t below `bit` cleared
        let mut h = c.mul(y, ctx.z_pow_n((2 * t).wrapping_neg()));
        for _ in 0..k - 2 - bit {
            h = c.square(h);
        }
        if h != 1 {
            t |= 1 << bit;
        }
    }
    if ctx.z_pow_n(2 * t) != y {
        return Err(Error::NoClass { a, p: ctx.p() });
    }
    Ok(t)
}

/// `a^((n+1)/2) z^(en)` with `e = -t mod 2^(k-1)` for the residue's class `t`.
/// Even `e = 2m` is the multiplier `z^(2mn)`; `e = 0` is the bare `a^((n+1)/2)`.
pub fn direct_sqrt(ctx: &PrimeContext, a: u64) -> Result<SqrtOutcome> {
    ctx.check_range(a)?;
    let p = ctx.p();
    if a == 0 {
        return Ok(SqrtOutcome::from_raw(0, p, Method::Direct, 0));
    }
    let t = residue_class(ctx, a)?;
    let mut c = MulCounter::new(p);
    let half = c.pow(a, ctx.odd_part().div_ceil(2));
    let e = t.wrapping_neg() & (ctx.class_count() - 1);
    let root = c.mul(half, ctx.z_pow_n(e));
    Ok(SqrtOutcome::from_raw(root, p, Method::Direct, c.count()))
}
