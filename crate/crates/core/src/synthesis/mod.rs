//! General-`k` closed forms.
//!
//! Every quadratic residue `a` of `p = 2^k n + 1` satisfies `a^n = z^(2tn)`
//! for exactly one class index `t` in `[0, 2^(k-1))`, and then
//! `a^((n+1)/2) z^(en)` with `e = -t mod 2^(k-1)` is a square root of `a`.
//! The formula for `k` is a sum of `2^(k-1)` terms, one per class:
//!
//! ```text
//! term_t(x) = z^(e n) * prod_{j = k-2 .. 0} (1 + x^(2^j n) z^(c_j n)),
//!     c_j = -2^(j+1) t mod 2^k
//! ```
//!
//! The product telescopes to a geometric series in `(x^n z^(-2tn))^2` over
//! the 2-Sylow subgroup, which is `2^(k-1)` when `a` lies in class `t` and
//! zero otherwise. Scaling the sum by `2^-(k-1) x^((n+1)/2)` yields the root.
//!
//! This reconstruction of the term construction reproduces the printed
//! forms for `k = 2, 3, 4` term for term; the exhaustive tests check it for
//! larger `k`.

mod expand;
mod render;

pub use expand::{degree_check, expand, expected_degree, ExpandedPolynomial, Monomial};
pub use render::{normalize_signs, render, Format, RenderedFactor, RenderedTerm};

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{inverse_two_power, residue_powers, Method, SqrtOutcome};
use crate::modarith::{MulCounter, PrimeContext};

/// Largest supported 2-adicity; the formula has `2^(k-1)` terms.
pub const MAX_K: u32 = 16;

/// `(1 + x^(2^level * n) * z^(z_exp * n))` with `z_exp < 2^k`; exponents of
/// `2^(k-1)` and up fold into a minus sign when rendered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    #[serde(rename = "j")]
    pub level: u32,
    #[serde(rename = "c")]
    pub z_exp: u64,
}

/// `z^(multiplier * n)` times one factor per level, highest level first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Term {
    #[serde(rename = "e")]
    pub multiplier: u64,
    pub factors: Vec<Factor>,
}

/// The bracketed sum of a closed form, indexed by class `t`. The prefactor
/// `2^-(k-1) x^((n+1)/2)` is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFormula")]
pub struct SymbolicFormula {
    k: u32,
    terms: Vec<Term>,
}

#[derive(Deserialize)]
struct RawFormula {
    k: u32,
    terms: Vec<Term>,
}

impl TryFrom<RawFormula> for SymbolicFormula {
    type Error = Error;

    fn try_from(raw: RawFormula) -> Result<Self> {
        Self::from_parts(raw.k, raw.terms)
    }
}

impl SymbolicFormula {
    /// Builds a formula from explicit terms, checking the structural invariants.
    pub fn from_parts(k: u32, terms: Vec<Term>) -> Result<Self> {
        if !(1..=MAX_K).contains(&k) {
            return Err(Error::UnsupportedK(k));
        }
        let classes = 1u64 << (k - 1);
        let sylow = 1u64 << k;
        let bad = |msg: String| Err(Error::MalformedFormula(msg));
        if terms.len() as u64 != classes {
            return bad(format!("expected {classes} terms, found {}", terms.len()));
        }
        for (t, term) in terms.iter().enumerate() {
            if term.multiplier >= classes {
                return bad(format!("term {t}: multiplier {} out of range", term.multiplier));
            }
            if term.factors.len() != k as usize - 1 {
                return bad(format!("term {t}: expected {} factors", k - 1));
            }
            for (i, f) in term.factors.iter().enumerate() {
                let level = k - 2 - i as u32;
                if f.level != level {
                    return bad(format!("term {t}: factor {i} has level {}, expected {level}", f.level));
                }
                if f.z_exp >= sylow {
                    return bad(format!("term {t}: z exponent {} out of range", f.z_exp));
                }
            }
        }
        let first = &terms[0];
        if first.multiplier != 0 || first.factors.iter().any(|f| f.z_exp != 0) {
            return bad("term 0 must be the all-plus term".into());
        }
        Ok(Self { k, terms })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Replaces one term without validation, for fault-injection fixtures.
    #[doc(hidden)]
    pub fn with_term_unchecked(mut self, t: usize, term: Term) -> Self {
        self.terms[t] = term;
        self
    }
}

/// Builds the closed form for 2-adicity `k`, terms ordered by class index.
pub fn synthesize(k: u32) -> Result<SymbolicFormula> {
    if !(1..=MAX_K).contains(&k) {
        return Err(Error::UnsupportedK(k));
    }
    let classes = 1u64 << (k - 1);
    let sylow_mask = (1u64 << k) - 1;
    let terms = (0..classes)
        .map(|t| Term {
            multiplier: (classes - t) & (classes - 1),
            factors: (0..k - 1)
                .rev()
                .map(|level| Factor {
                    level,
                    z_exp: (t << (level + 1)).wrapping_neg() & sylow_mask,
                })
                .collect(),
        })
        .collect();
    SymbolicFormula::from_parts(k, terms)
}

/// Process-wide memo of `synthesize(k)`.
pub fn cached(k: u32) -> Result<&'static SymbolicFormula> {
    static CACHE: [OnceLock<SymbolicFormula>; MAX_K as usize + 1] =
        [const { OnceLock::new() }; MAX_K as usize + 1];
    if !(1..=MAX_K).contains(&k) {
        return Err(Error::UnsupportedK(k));
    }
    Ok(CACHE[k as usize].get_or_init(|| synthesize(k).expect("k is in range")))
}

/// Values of each bracketed term at the point whose level powers are given.
pub(crate) fn term_values(
    f: &SymbolicFormula,
    ctx: &PrimeContext,
    levels: &[u64],
    c: &mut MulCounter,
) -> Vec<u64> {
    f.terms
        .iter()
        .map(|term| {
            let mut acc = ctx.z_pow_n(term.multiplier);
            for factor in &term.factors {
                let x = levels[factor.level as usize];
                let xz = c.mul(x, ctx.z_pow_n(factor.z_exp));
                acc = c.mul(acc, c.add(1, xz));
            }
            acc
        })
        .collect()
}

fn require_matching_k(f: &SymbolicFormula, ctx: &PrimeContext) -> Result<()> {
    if f.k != ctx.two_adicity() {
        return Err(Error::WrongClass {
            expected: f.k,
            actual: ctx.two_adicity(),
            p: ctx.p(),
        });
    }
    Ok(())
}

/// Evaluates the formula at a quadratic residue (or 0).
pub fn evaluate(f: &SymbolicFormula, ctx: &PrimeContext, a: u64) -> Result<SqrtOutcome> {
    require_matching_k(f, ctx)?;
    let mut c = MulCounter::new(ctx.p());
    let pw = residue_powers(ctx, a, &mut c)?;
    let bracket = term_values(f, ctx, &pw.levels, &mut c)
        .into_iter()
        .fold(0, |acc, t| c.add(acc, t));
    let inv = inverse_two_power(ctx, f.k, &mut c);
    let pre = c.mul(inv, pw.half);
    let raw = c.mul(pre, bracket);
    Ok(SqrtOutcome::from_raw(raw, ctx.p(), Method::Synth, c.count()))
}

/// The polynomial's value at any point of `F_p`, residue or not.
pub fn evaluate_at(f: &SymbolicFormula, ctx: &PrimeContext, v: u64) -> Result<u64> {
    require_matching_k(f, ctx)?;
    ctx.check_range(v)?;
    let mut c = MulCounter::new(ctx.p());
    let n = ctx.odd_part();
    let half = c.pow(v, n.div_ceil(2));
    let mut levels = Vec::with_capacity(f.k as usize - 1);
    let mut cur = c.pow(v, n);
    for _ in 0..f.k - 1 {
        levels.push(cur);
        cur = c.square(cur);
    }
    let bracket = term_values(f, ctx, &levels, &mut c)
        .into_iter()
        .fold(0, |acc, t| c.add(acc, t));
    let inv = inverse_two_power(ctx, f.k, &mut c);
    let pre = c.mul(inv, half);
    Ok(c.mul(pre, bracket))
}

/// Values of each term at the quadratic residue `a`, before scaling.
pub fn evaluate_terms(f: &SymbolicFormula, ctx: &PrimeContext, a: u64) -> Result<Vec<u64>> {
    require_matching_k(f, ctx)?;
    let mut c = MulCounter::new(ctx.p());
    let pw = residue_powers(ctx, a, &mut c)?;
    Ok(term_values(f, ctx, &pw.levels, &mut c))
}
