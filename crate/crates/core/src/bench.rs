//! Multiplication-count benchmarks over deterministic residue samples.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::formulas::{sqrt_with, Method};
use crate::modarith::PrimeContext;

/// `trials` quadratic residues found by scanning upward (cyclically) from
/// `seed mod p`, skipping 0 and nonresidues. Repeats once the residues run out.
pub fn sample_residues(ctx: &PrimeContext, seed: u64, trials: usize) -> Vec<u64> {
    let p = ctx.p();
    let mut out = Vec::with_capacity(trials);
    let mut a = seed % p;
    while out.len() < trials {
        if a != 0 && ctx.legendre(a) == 1 {
            out.push(a);
        }
        a = (a + 1) % p;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub method: Method,
    pub p: u64,
    pub trials: u64,
    pub total_mul_count: u64,
    pub mean_mul_count: f64,
    pub min_mul_count: u64,
    pub max_mul_count: u64,
    /// Number of distinct per-call counts; 1 for straight-line evaluators.
    pub distinct_mul_counts: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ns: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub p: u64,
    pub k: u32,
    pub n: u64,
    pub seed: u64,
    pub records: Vec<BenchRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub p: u64,
    pub trials: usize,
    pub methods: Vec<Method>,
    pub seed: u64,
    /// Record wall time per method (makes the report non-reproducible).
    pub timing: bool,
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    let ctx = PrimeContext::new(cfg.p)?;
    let samples = sample_residues(&ctx, cfg.seed, cfg.trials.max(1));
    let records = cfg
        .methods
        .iter()
        .map(|&method| bench_method(&ctx, method, &samples, cfg.timing))
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchReport {
        p: ctx.p(),
        k: ctx.two_adicity(),
        n: ctx.odd_part(),
        seed: cfg.seed,
        records,
    })
}

fn bench_method(
    ctx: &PrimeContext,
    method: Method,
    samples: &[u64],
    timing: bool,
) -> Result<BenchRecord> {
    let start = Instant::now();
    let counts = samples
        .iter()
        .map(|&a| sqrt_with(method, ctx, a).map(|o| o.mul_count))
        .collect::<Result<Vec<u64>>>()?;
    let elapsed = start.elapsed();
    let total: u64 = counts.iter().sum();
    let mut distinct = counts.clone();
    distinct.sort_unstable();
    distinct.dedup();
    Ok(BenchRecord {
        method,
        p: ctx.p(),
        trials: counts.len() as u64,
        total_mul_count: total,
        mean_mul_count: total as f64 / counts.len() as f64,
        min_mul_count: distinct[0],
        max_mul_count: distinct[distinct.len() - 1],
        distinct_mul_counts: distinct.len() as u64,
        wall_time_ns: timing.then_some(elapsed.as_nanos() as u64),
    })
}
