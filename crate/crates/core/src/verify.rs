//! Exhaustive sweeps of a square-root method against brute force.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::formulas::{sqrt_with, Method, SqrtOutcome};
use crate::modarith::{is_prime, mul_mod, PrimeContext};
use crate::oracles::{SquareTable, BRUTE_FORCE_BOUND};
use crate::synthesis;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub pmin: u64,
    pub pmax: u64,
    pub k_filter: Option<u32>,
    /// `None` means `sqrt_auto`.
    pub method: Option<Method>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub a: u64,
    /// Roots the method returned, if it returned any.
    pub got: Option<[u64; 2]>,
    /// Brute-force root set.
    pub expected: Vec<u64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeResult {
    pub p: u64,
    pub k: u32,
    pub n: u64,
    pub z: u64,
    pub residues_checked: u64,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pmin: u64,
    pub pmax: u64,
    pub k_filter: Option<u32>,
    pub method: String,
    pub primes_tested: u64,
    pub residues_checked: u64,
    pub passed: bool,
    pub primes: Vec<PrimeResult>,
    /// Filled in only on request; omitted from reproducible reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl VerificationReport {
    pub fn failure_count(&self) -> usize {
        self.primes.iter().map(|r| r.failures.len()).sum()
    }
}

impl VerifyConfig {
    /// The class filter in force: explicit, or implied by an `f_k` method.
    fn effective_k(&self) -> Result<Option<u32>> {
        let required = self.method.and_then(Method::required_k);
        match (self.k_filter, required) {
            (Some(k), Some(r)) if k != r => Err(Error::ConflictingK {
                method_k: r,
                filter_k: k,
            }),
            (k, r) => Ok(k.or(r)),
        }
    }

    fn accepts(&self, k_filter: Option<u32>, k: u32) -> bool {
        let synth_ok = self.method != Some(Method::Synth) || k <= synthesis::MAX_K;
        synth_ok && k_filter.is_none_or(|want| want == k)
    }
}

/// Checks every quadratic residue of every prime in range with the method in
/// `cfg`. Primes are processed concurrently and reported in ascending order.
pub fn verify_range(cfg: &VerifyConfig, exec: Execution) -> Result<VerificationReport> {
    let method = cfg.method;
    verify_range_with(cfg, exec, &move |ctx: &PrimeContext, a: u64| match method {
        None => crate::formulas::sqrt_auto(ctx, a),
        Some(m) => sqrt_with(m, ctx, a),
    })
}

/// Like [`verify_range`] with an arbitrary solver.
pub fn verify_range_with<F>(
    cfg: &VerifyConfig,
    exec: Execution,
    solver: &F,
) -> Result<VerificationReport>
where
    F: Fn(&PrimeContext, u64) -> Result<SqrtOutcome> + Sync,
{
    if cfg.pmin > cfg.pmax {
        return Err(Error::BadRange { pmin: cfg.pmin, pmax: cfg.pmax });
    }
    if cfg.pmax > BRUTE_FORCE_BOUND {
        return Err(Error::ExhaustionBound { p: cfg.pmax, bound: BRUTE_FORCE_BOUND });
    }
    let k_filter = cfg.effective_k()?;
    let contexts: Vec<PrimeContext> = (cfg.pmin.max(3)..=cfg.pmax)
        .filter(|&p| is_prime(p))
        .map(PrimeContext::new)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|ctx| cfg.accepts(k_filter, ctx.two_adicity()))
        .collect();

    let primes = exec
        .map(&contexts, |ctx| verify_prime(ctx, solver))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let residues_checked = primes.iter().map(|r| r.residues_checked).sum();
    let passed = primes.iter().all(|r| r.failures.is_empty());
    Ok(VerificationReport {
        pmin: cfg.pmin,
        pmax: cfg.pmax,
        k_filter,
        method: cfg.method.map_or("auto", Method::name).to_string(),
        primes_tested: primes.len() as u64,
        residues_checked,
        passed,
        primes,
        wall_time_ms: None,
    })
}

fn verify_prime<F>(ctx: &PrimeContext, solver: &F) -> Result<PrimeResult>
where
    F: Fn(&PrimeContext, u64) -> Result<SqrtOutcome>,
{
    let p = ctx.p();
    let table = SquareTable::new(p)?;
    let mut failures = Vec::new();
    let mut checked = 0;
    for a in 1..p {
        let expected = table.roots(a);
        if expected.is_empty() {
            continue;
        }
        checked += 1;
        match solver(ctx, a) {
            Ok(out) => {
                let squares_back = mul_mod(out.root, out.root, p) == a;
                if !squares_back || out.roots().as_slice() != expected.as_slice() {
                    failures.push(Failure {
                        a,
                        got: Some(out.roots()),
                        expected,
                        error: None,
                    });
                }
            }
            Err(e) => failures.push(Failure {
                a,
                got: None,
                expected,
                error: Some(e.to_string()),
            }),
        }
    }
    Ok(PrimeResult {
        p,
        k: ctx.two_adicity(),
        n: ctx.odd_part(),
        z: ctx.nonresidue(),
        residues_checked: checked,
        failures,
    })
}
