//! Multiplying a closed form out into a sparse polynomial over `F_p`.
//!
//! Exponents are collected, never reduced modulo `x^p - x`, so the degree
//! reported is that of the unreduced product form.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{SymbolicFormula, Term};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::modarith::{add_mod, mod_pow, mul_mod, PrimeContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub exponent: u64,
    pub coefficient: u64,
}

/// Sparse polynomial: exponents strictly decreasing, coefficients in `[1, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpandedPolynomial {
    pub modulus: u64,
    pub terms: Vec<Monomial>,
}

impl ExpandedPolynomial {
    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.first().map(|m| m.exponent)
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, v: u64) -> u64 {
        let p = self.modulus;
        self.terms.iter().fold(0, |acc, m| {
            add_mod(acc, mul_mod(m.coefficient, mod_pow(v, m.exponent, p), p), p)
        })
    }
}

impl fmt::Display for ExpandedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let coeff = if m.coefficient == 1 && m.exponent != 0 {
                String::new()
            } else {
                m.coefficient.to_string()
            };
            match m.exponent {
                0 => write!(f, "{coeff}")?,
                1 => write!(f, "{coeff}x")?,
                e => write!(f, "{coeff}x^{e}")?,
            }
        }
        Ok(())
    }
}

/// `2^(k-1) n - (n-1)/2`, the degree of the expanded closed form.
pub fn expected_degree(ctx: &PrimeContext) -> Option<u64> {
    let n = ctx.odd_part();
    ctx.class_count()
        .checked_mul(n)
        .map(|top| top - (n - 1) / 2)
}

/// Coefficients of `X^m` (`X = x^n`) contributed by `terms`, before the
/// `2^-(k-1)` scale. Monomial `m` of a term picks the factors whose level
/// bits are set in `m`, so its `z` exponent is the multiplier plus those
/// factors' exponents.
fn accumulate(ctx: &PrimeContext, k: u32, terms: &[Term]) -> Vec<u64> {
    let p = ctx.p();
    let width = 1usize << (k - 1);
    let mut coeffs = vec![0u64; width];
    let mut exps = vec![0u64; width];
    for term in terms {
        // factors are stored highest level first
        let by_level: Vec<u64> = term.factors.iter().rev().map(|f| f.z_exp).collect();
        exps[0] = term.multiplier;
        coeffs[0] = add_mod(coeffs[0], ctx.z_pow_n(exps[0]), p);
        for m in 1..width {
            let low = m.trailing_zeros() as usize;
            exps[m] = exps[m & (m - 1)] + by_level[low];
            coeffs[m] = add_mod(coeffs[m], ctx.z_pow_n(exps[m]), p);
        }
    }
    coeffs
}

pub fn expand(f: &SymbolicFormula, ctx: &PrimeContext) -> Result<ExpandedPolynomial> {
    expand_with(f, ctx, Execution::default())
}

/// Multiplies out every term and collects like powers.
pub fn expand_with(
    f: &SymbolicFormula,
    ctx: &PrimeContext,
    exec: Execution,
) -> Result<ExpandedPolynomial> {
    let k = f.k();
    if k != ctx.two_adicity() {
        return Err(Error::WrongClass {
            expected: k,
            actual: ctx.two_adicity(),
            p: ctx.p(),
        });
    }
    let p = ctx.p();
    let n = ctx.odd_part();
    let offset = n.div_ceil(2);
    let top = (ctx.class_count() - 1)
        .checked_mul(n)
        .and_then(|x| x.checked_add(offset))
        .ok_or(Error::ExponentOverflow(p))?;
    debug_assert_eq!(Some(top), expected_degree(ctx));

    let chunk = (f.terms().len() / 64).max(1);
    let chunks: Vec<&[Term]> = f.terms().chunks(chunk).collect();
    let partials = exec.map(&chunks, |terms| accumulate(ctx, k, terms));
    let mut coeffs = vec![0u64; ctx.class_count() as usize];
    for partial in partials {
        for (acc, c) in coeffs.iter_mut().zip(partial) {
            *acc = add_mod(*acc, c, p);
        }
    }

    let mut scale = 1u64;
    for _ in 1..k {
        scale = mul_mod(scale, p.div_ceil(2), p);
    }
    let terms = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter_map(|(m, &c)| {
            let coefficient = mul_mod(c, scale, p);
            (coefficient != 0).then(|| Monomial {
                exponent: offset + m as u64 * n,
                coefficient,
            })
        })
        .collect();
    Ok(ExpandedPolynomial { modulus: p, terms })
}

/// True iff the degree is exactly `2^(k-1) n - (n-1)/2` and there are at most
/// `2^(k-1)` terms.
pub fn degree_check(poly: &ExpandedPolynomial, ctx: &PrimeContext) -> bool {
    poly.degree().is_some()
        && poly.degree() == expected_degree(ctx)
        && poly.len() as u64 <= ctx.class_count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::is_prime;
    use crate::synthesis::{cached, evaluate_at, synthesize};

    fn expand_for(p: u64) -> (PrimeContext, ExpandedPolynomial) {
        let ctx = PrimeContext::new(p).unwrap();
        let poly = expand(&synthesize(ctx.two_adicity()).unwrap(), &ctx).unwrap();
        (ctx, poly)
    }

    #[test]
    fn p13_golden() {
        let (ctx, poly) = expand_for(13);
        assert_eq!(poly.to_string(), "3x^5 + 11x^2");
        assert!(degree_check(&poly, &ctx));
        assert_eq!(poly.evaluate(4), 11);
    }

    #[test]
    fn p7_is_a_single_monomial() {
        let (ctx, poly) = expand_for(7);
        assert_eq!(poly.to_string(), "x^2");
        assert!(degree_check(&poly, &ctx));
    }

    #[test]
    fn p41_and_p17() {
        let (ctx, poly) = expand_for(41);
        assert_eq!(poly.degree(), Some(18));
        assert!(poly.len() <= 4);
        assert!(poly.terms.iter().all(|m| [3, 8, 13, 18].contains(&m.exponent)));
        assert!(degree_check(&poly, &ctx));

        let (ctx, poly) = expand_for(17);
        assert!(degree_check(&poly, &ctx));
    }

    #[test]
    fn degree_check_rejects_wrong_shapes() {
        let (ctx, mut poly) = expand_for(13);
        poly.terms.remove(0);
        assert!(!degree_check(&poly, &ctx));
        poly.terms.clear();
        assert!(!degree_check(&poly, &ctx));
    }

    #[test]
    fn agrees_pointwise_with_product_form() {
        for p in (3..1_500u64).filter(|&p| is_prime(p)) {
            let ctx = PrimeContext::new(p).unwrap();
            let f = cached(ctx.two_adicity()).unwrap();
            let poly = expand(f, &ctx).unwrap();
            for v in 0..p {
                assert_eq!(poly.evaluate(v), evaluate_at(f, &ctx, v).unwrap(), "p={p} v={v}");
            }
        }
    }

    #[test]
    fn sequential_and_parallel_expansions_match() {
        let ctx = PrimeContext::new(7681).unwrap(); // k = 9
        let f = cached(9).unwrap();
        assert_eq!(
            expand_with(f, &ctx, Execution::Sequential).unwrap(),
            expand_with(f, &ctx, Execution::Parallel).unwrap()
        );
    }

    #[test]
    fn display_edge_cases() {
        let poly = ExpandedPolynomial {
            modulus: 7,
            terms: vec![
                Monomial { exponent: 3, coefficient: 1 },
                Monomial { exponent: 1, coefficient: 2 },
                Monomial { exponent: 0, coefficient: 1 },
            ],
        };
        assert_eq!(poly.to_string(), "x^3 + 2x + 1");
        let zero = ExpandedPolynomial { modulus: 7, terms: vec![] };
        assert_eq!(zero.to_string(), "0");
    }
}
