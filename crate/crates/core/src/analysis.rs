//! Exact order statistics of the quadratic residues of one prime.
//!
//! Everything here is counted, not sampled, and fractions are exact
//! rationals, so the probability laws for a fixed `p` can be asserted as
//! equalities.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::modarith::{decompose, is_prime, mod_pow, mul_mod, PrimeContext};
use crate::oracles::residue_class_lift;

/// Largest prime a census will enumerate.
pub const CENSUS_BOUND: u64 = 1 << 22;

pub type Fraction = Ratio<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub p: u64,
    pub k: u32,
    pub n: u64,
    /// `(p-1)/2 = 2^(k-1) n`.
    pub qr_count: u64,
    /// Residues of odd multiplicative order; these form the subgroup of order `n`.
    pub odd_order_count: u64,
    /// Residues of multiplicative order exactly `2^(k-1)`.
    pub exact_2k1_order_count: u64,
    /// Residue counts per class index `t`.
    pub class_histogram: Vec<u64>,
    /// Residue counts per root multiplier exponent `e = -t mod 2^(k-1)`.
    pub multiplier_histogram: Vec<u64>,
    pub odd_order_fraction: Fraction,
    pub exact_2k1_fraction: Fraction,
    /// `1 / 2^(k-1)`.
    pub predicted_odd_order_fraction: Fraction,
    /// `1 / (2n)`, stated for `k >= 2` only.
    pub predicted_exact_2k1_fraction: Option<Fraction>,
}

/// Distinct prime factors of `m` by trial division.
fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Multiplicative order of a unit `a`, given the prime factors of `p - 1`.
pub fn multiplicative_order(a: u64, p: u64, factors_of_p_minus_1: &[u64]) -> u64 {
    let mut order = p - 1;
    for &q in factors_of_p_minus_1 {
        while order.is_multiple_of(q) && mod_pow(a, order / q, p) == 1 {
            order /= q;
        }
    }
    order
}

#[derive(Debug, Clone, Default)]
struct Tally {
    odd: u64,
    exact: u64,
    classes: Vec<u64>,
    multipliers: Vec<u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.odd += other.odd;
        self.exact += other.exact;
        for (a, b) in self.classes.iter_mut().zip(other.classes) {
            *a += b;
        }
        for (a, b) in self.multipliers.iter_mut().zip(other.multipliers) {
            *a += b;
        }
        self
    }
}

pub fn order_census(ctx: &PrimeContext) -> Result<DensityReport> {
    order_census_with(ctx, Execution::default())
}

/// Counts residues by order class. Residues are enumerated as `v^2` for
/// `v` in `[1, (p-1)/2]`, which visits each exactly once.
pub fn order_census_with(ctx: &PrimeContext, exec: Execution) -> Result<DensityReport> {
    let p = ctx.p();
    if p > CENSUS_BOUND {
        return Err(Error::ExhaustionBound { p, bound: CENSUS_BOUND });
    }
    let k = ctx.two_adicity();
    let n = ctx.odd_part();
    let classes = ctx.class_count();
    let exact_order = classes;
    let factors = prime_factors(p - 1);
    let qr_count = (p - 1) / 2;

    let empty = Tally {
        classes: vec![0; classes as usize],
        multipliers: vec![0; classes as usize],
        ..Tally::default()
    };
    let partials = exec.map_chunks(qr_count, 4_096, |range| {
        let mut tally = empty.clone();
        for v in range {
            let a = mul_mod(v + 1, v + 1, p);
            let order = multiplicative_order(a, p, &factors);
            tally.odd += order % 2;
            tally.exact += u64::from(order == exact_order);
            let t = residue_class_lift(ctx, a).expect("squares are residues");
            tally.classes[t as usize] += 1;
            let e = t.wrapping_neg() & (classes - 1);
            tally.multipliers[e as usize] += 1;
        }
        tally
    });
    let total = partials.into_iter().fold(empty.clone(), Tally::merge);

    Ok(DensityReport {
        p,
        k,
        n,
        qr_count,
        odd_order_count: total.odd,
        exact_2k1_order_count: total.exact,
        class_histogram: total.classes,
        multiplier_histogram: total.multipliers,
        odd_order_fraction: Ratio::new(total.odd, qr_count),
        exact_2k1_fraction: Ratio::new(total.exact, qr_count),
        predicted_odd_order_fraction: Ratio::new(1, classes),
        predicted_exact_2k1_fraction: (k >= 2).then(|| Ratio::new(1, 2 * n)),
    })
}

/// Histogram of root multiplier exponents `e` over all residues.
pub fn multiplier_census(ctx: &PrimeContext) -> Result<Vec<u64>> {
    Ok(order_census(ctx)?.multiplier_histogram)
}

/// One prime of a fixed-`k` sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrendRow {
    pub p: u64,
    pub n: u64,
    /// Share of residues of order exactly `2^(k-1)`.
    pub exact_2k1_fraction: Fraction,
    /// `1 - exact_2k1_fraction`: residues outside that exceptional order.
    pub covered_fraction: Fraction,
    /// Share of residues whose root multiplier exponent `e` is odd.
    pub odd_multiplier_fraction: Fraction,
}

/// Census of every prime `p <= pmax` with `v2(p - 1) = k`, ascending.
pub fn density_trend(k: u32, pmax: u64, exec: Execution) -> Result<Vec<TrendRow>> {
    if pmax > CENSUS_BOUND {
        return Err(Error::ExhaustionBound { p: pmax, bound: CENSUS_BOUND });
    }
    let primes: Vec<u64> = (3..=pmax)
        .filter(|&p| is_prime(p) && decompose(p).map(|(kk, _)| kk) == Ok(k))
        .collect();
    let rows = exec.map(&primes, |&p| -> Result<TrendRow> {
        let ctx = PrimeContext::new(p)?;
        let report = order_census_with(&ctx, Execution::Sequential)?;
        let odd_e: u64 = report.multiplier_histogram.iter().skip(1).step_by(2).sum();
        Ok(TrendRow {
            p,
            n: report.n,
            exact_2k1_fraction: report.exact_2k1_fraction,
            covered_fraction: Ratio::from_integer(1) - report.exact_2k1_fraction,
            odd_multiplier_fraction: Ratio::new(odd_e, report.qr_count),
        })
    });
    rows.into_iter().collect()
}
