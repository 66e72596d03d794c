//! Prime contexts and the modular arithmetic every other module builds on.
//!
//! All products go through a `u128` accumulator, so any 64-bit modulus is
//! safe. A [`PrimeContext`] bundles an odd prime `p` with its decomposition
//! `p - 1 = 2^k * n` (`n` odd), the smallest quadratic nonresidue `z`, and
//! (for `k <= 16`) a table of the powers `z^(j*n)` for `j` in `[0, 2^k)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest 2-adicity for which the `z^(j*n)` table is materialized.
pub const MAX_TABLE_K: u32 = 16;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

/// `base^exp mod p`, with `0^0 = 1`.
pub fn mod_pow(base: u64, exp: u64, p: u64) -> u64 {
    if p == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % p;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    result
}

/// Witnesses that make Miller-Rabin exact for every `m < 2^64`.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality test over the full `u64` range.
pub fn is_prime(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    for &q in &MR_WITNESSES {
        if m == q {
            return true;
        }
        if m.is_multiple_of(q) {
            return false;
        }
    }
    let (s, d) = split_two_power(m - 1);
    'witness: for &a in &MR_WITNESSES {
        let mut x = mod_pow(a, d, m);
        if x == 1 || x == m - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, m);
            if x == m - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Writes a nonzero `m` as `2^s * d` with `d` odd.
fn split_two_power(m: u64) -> (u32, u64) {
    let s = m.trailing_zeros();
    (s, m >> s)
}

/// Splits `p - 1 = 2^k * n` with `n` odd.
pub fn decompose(p: u64) -> Result<(u32, u64)> {
    if p < 3 || p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(split_two_power(p - 1))
}

/// Legendre symbol `(a | p)` by Euler's criterion. `p` must be an odd prime.
pub fn legendre_symbol(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if mod_pow(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Smallest `z >= 2` that is a quadratic nonresidue mod the odd prime `p`.
pub fn find_nonresidue(p: u64) -> Result<u64> {
    decompose(p)?;
    // Some z below p always qualifies since half the units are nonresidues.
    (2..p)
        .find(|&z| legendre_symbol(z, p) == -1)
        .ok_or(Error::NotOddPrime(p))
}

/// A validated odd prime with its 2-adic decomposition and a fixed nonresidue.
///
/// Immutable after construction; share it freely across threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeContext {
    p: u64,
    two_adicity: u32,
    odd_part: u64,
    nonresidue: u64,
    /// `z^n`, a generator of the 2-Sylow subgroup (order `2^k`).
    sylow_generator: u64,
    /// `z^(j*n)` for `j` in `[0, 2^k)`; present when `k <= MAX_TABLE_K`.
    z_table: Option<Vec<u64>>,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self> {
        let (two_adicity, odd_part) = decompose(p)?;
        let nonresidue = find_nonresidue(p)?;
        let sylow_generator = mod_pow(nonresidue, odd_part, p);
        let z_table = (two_adicity <= MAX_TABLE_K).then(|| {
            let len = 1usize << two_adicity;
            let mut table = Vec::with_capacity(len);
            let mut acc = 1u64;
            for _ in 0..len {
                table.push(acc);
                acc = mul_mod(acc, sylow_generator, p);
            }
            table
        });
        Ok(Self {
            p,
            two_adicity,
            odd_part,
            nonresidue,
            sylow_generator,
            z_table,
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// `k = v2(p - 1)`.
    #[inline]
    pub fn two_adicity(&self) -> u32 {
        self.two_adicity
    }

    /// The odd cofactor `n` of `p - 1`.
    #[inline]
    pub fn odd_part(&self) -> u64 {
        self.odd_part
    }

    /// The context's quadratic nonresidue `z`.
    #[inline]
    pub fn nonresidue(&self) -> u64 {
        self.nonresidue
    }

    /// `z^n`, of multiplicative order exactly `2^k`.
    #[inline]
    pub fn sylow_generator(&self) -> u64 {
        self.sylow_generator
    }

    /// `2^k`, the order of the 2-Sylow subgroup.
    #[inline]
    pub fn sylow_order(&self) -> u64 {
        1u64 << self.two_adicity
    }

    /// Number of residue classes, `2^(k-1)`.
    #[inline]
    pub fn class_count(&self) -> u64 {
        1u64 << (self.two_adicity - 1)
    }

    pub fn z_table(&self) -> Option<&[u64]> {
        self.z_table.as_deref()
    }

    /// `z^(j*n) mod p`, with `j` taken mod `2^k`. Free when the table exists.
    #[inline]
    pub fn z_pow_n(&self, j: u64) -> u64 {
        let j = j & (self.sylow_order() - 1);
        match &self.z_table {
            Some(table) => table[j as usize],
            None => mod_pow(self.sylow_generator, j, self.p),
        }
    }

    pub fn legendre(&self, a: u64) -> i8 {
        legendre_symbol(a, self.p)
    }

    pub fn check_range(&self, a: u64) -> Result<()> {
        if a >= self.p {
            return Err(Error::OutOfRange { value: a, p: self.p });
        }
        Ok(())
    }

    /// Validates `a` as an element of `F_p`.
    pub fn residue(&self, a: u64) -> Result<Residue> {
        self.check_range(a)?;
        Ok(Residue(a))
    }

    pub fn summary(&self) -> ContextSummary {
        ContextSummary {
            p: self.p,
            k: self.two_adicity,
            n: self.odd_part,
            z: self.nonresidue,
        }
    }
}

/// `make_context` under its conventional name.
pub fn make_context(p: u64) -> Result<PrimeContext> {
    PrimeContext::new(p)
}

/// An element of `F_p` known to lie in `[0, p)` for the context that built it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Residue(u64);

impl Residue {
    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }
}

/// The `(p, k, n, z)` quadruple as it appears in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextSummary {
    pub p: u64,
    pub k: u32,
    pub n: u64,
    pub z: u64,
}

/// Modular arithmetic that tallies every multiplication (squarings included).
#[derive(Debug, Clone)]
pub struct MulCounter {
    p: u64,
    count: u64,
}

impl MulCounter {
    pub fn new(p: u64) -> Self {
        Self { p, count: 0 }
    }

    #[inline]
    pub fn mul(&mut self, a: u64, b: u64) -> u64 {
        self.count += 1;
        mul_mod(a, b, self.p)
    }

    #[inline]
    pub fn square(&mut self, a: u64) -> u64 {
        self.mul(a, a)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a, b, self.p)
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        sub_mod(a, b, self.p)
    }

    /// Left-to-right square-and-multiply; the count depends only on `exp`.
    pub fn pow(&mut self, base: u64, exp: u64) -> u64 {
        if exp == 0 {
            return 1 % self.p;
        }
        let base = base % self.p;
        let top = 63 - exp.leading_zeros();
        let mut acc = base;
        for bit in (0..top).rev() {
            acc = self.square(acc);
            if (exp >> bit) & 1 == 1 {
                acc = self.mul(acc, base);
            }
        }
        acc
    }

    /// Euler-criterion screen: errors unless `a` is 0 or a quadratic residue.
    pub fn screen_residue(&mut self, a: u64) -> Result<()> {
        if a != 0 && self.pow(a, (self.p - 1) / 2) != 1 {
            return Err(Error::NotAResidue { a, p: self.p });
        }
        Ok(())
    }

    #[inline]
    pub fn count(&self) -> u64 {
        self.count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_is_prime(m: u64) -> bool {
        m >= 2 && (2..).take_while(|d| d * d <= m).all(|d| !m.is_multiple_of(d))
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(decompose(7).unwrap(), (1, 3));
        assert_eq!(decompose(41).unwrap(), (3, 5));
        assert_eq!(decompose(17).unwrap(), (4, 1));
    }

    #[test]
    fn decompose_rejects_bad_inputs() {
        for bad in [0, 1, 2, 4, 9, 91, 100] {
            assert_eq!(decompose(bad), Err(Error::NotOddPrime(bad)));
        }
    }

    #[test]
    fn is_prime_examples() {
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(is_prime(2));
        assert!(is_prime(41));
        assert!(!is_prime(91));
    }

    #[test]
    fn is_prime_matches_trial_division() {
        for m in 0..20_000u64 {
            assert_eq!(is_prime(m), trial_division_is_prime(m), "m = {m}");
        }
    }

    #[test]
    fn is_prime_large_values() {
        // Strong pseudoprime to bases 2..=37 would fool a short witness list.
        assert!(!is_prime(3_825_123_056_546_413_051));
        assert!(is_prime((1u64 << 61) - 1));
        assert!(is_prime(18_446_744_073_709_551_557)); // largest 64-bit prime
        assert!(!is_prime(u64::MAX));
        assert!(!is_prime(((1u64 << 31) - 1) * ((1u64 << 31) - 1)));
    }

    #[test]
    fn mod_pow_examples() {
        assert_eq!(mod_pow(3, 4, 7), 4);
        assert_eq!(mod_pow(5, 0, 13), 1);
        assert_eq!(mod_pow(0, 0, 13), 1);
        assert_eq!(mod_pow(2, 5, 13), 6);
    }

    #[test]
    fn mod_pow_matches_repeated_multiplication() {
        for p in 2..200u64 {
            for base in 0..p.min(40) {
                let mut naive = 1 % p;
                for exp in 0..64u64 {
                    assert_eq!(mod_pow(base, exp, p), naive, "{base}^{exp} mod {p}");
                    naive = naive * base % p;
                }
            }
        }
    }

    #[test]
    fn counter_pow_agrees_with_mod_pow() {
        let p = 1_000_000_007;
        for (b, e) in [(2, 0), (2, 1), (3, 2), (12345, 987654), (0, 5), (7, p - 2)] {
            let mut c = MulCounter::new(p);
            assert_eq!(c.pow(b, e), mod_pow(b, e, p));
        }
    }

    #[test]
    fn legendre_examples() {
        let c7 = PrimeContext::new(7).unwrap();
        let c41 = PrimeContext::new(41).unwrap();
        assert_eq!(c7.legendre(4), 1);
        assert_eq!(c7.legendre(3), -1);
        assert_eq!(c41.legendre(0), 0);
    }

    #[test]
    fn legendre_matches_enumeration() {
        for p in (3..2_000u64).filter(|&p| is_prime(p)) {
            let mut is_square = vec![false; p as usize];
            for r in 1..p {
                is_square[(r * r % p) as usize] = true;
            }
            assert_eq!(is_square.iter().filter(|&&s| s).count() as u64, (p - 1) / 2);
            for a in 1..p {
                let expected = if is_square[a as usize] { 1 } else { -1 };
                assert_eq!(legendre_symbol(a, p), expected, "({a} | {p})");
            }
        }
    }

    #[test]
    fn nonresidue_examples() {
        assert_eq!(find_nonresidue(13).unwrap(), 2);
        assert_eq!(find_nonresidue(41).unwrap(), 3);
        assert_eq!(find_nonresidue(17).unwrap(), 3);
        assert!(find_nonresidue(2).is_err());
    }

    #[test]
    fn make_context_examples() {
        for (p, k, n, z) in [(41, 3, 5, 3), (13, 2, 3, 2), (7, 1, 3, 3)] {
            let ctx = make_context(p).unwrap();
            assert_eq!(ctx.summary(), ContextSummary { p, k, n, z });
        }
        assert!(make_context(91).is_err());
    }

    #[test]
    fn context_invariants() {
        for p in (3..5_000u64).filter(|&p| is_prime(p)) {
            let ctx = PrimeContext::new(p).unwrap();
            let (k, n) = (ctx.two_adicity(), ctx.odd_part());
            assert_eq!(p - 1, (1 << k) * n);
            assert_eq!(n % 2, 1);
            assert_eq!(mod_pow(ctx.nonresidue(), (p - 1) / 2, p), p - 1);
            let half = (1u64 << (k - 1)) * n;
            assert_eq!(mod_pow(ctx.nonresidue(), half, p), p - 1);
            assert_eq!(mod_pow(ctx.nonresidue(), half * 2, p), 1);
            let table = ctx.z_table().unwrap();
            assert_eq!(table.len() as u64, ctx.sylow_order());
            assert_eq!(table[0], 1);
            assert_eq!(table[(ctx.sylow_order() / 2) as usize], p - 1);
            for (j, &entry) in table.iter().enumerate() {
                assert_eq!(entry, mod_pow(ctx.nonresidue(), j as u64 * n, p));
            }
            assert_eq!(ctx.z_pow_n(ctx.sylow_order()), 1);
        }
    }

    #[test]
    fn large_two_adicity_has_no_table() {
        // 2^20 * 7 + 1 is prime with k = 20.
        let p = 7 * (1u64 << 20) + 1;
        let ctx = PrimeContext::new(p).unwrap();
        assert_eq!(ctx.two_adicity(), 20);
        assert!(ctx.z_table().is_none());
        assert_eq!(ctx.z_pow_n(1 << 19), p - 1);
    }

    #[test]
    fn residue_range_check() {
        let ctx = PrimeContext::new(13).unwrap();
        assert_eq!(ctx.residue(12).unwrap().value(), 12);
        assert_eq!(ctx.residue(13), Err(Error::OutOfRange { value: 13, p: 13 }));
    }
}
