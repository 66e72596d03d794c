use std::fmt::{self, Write as _};
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use sqrtforms::analysis::{DensityReport, TrendRow};
use sqrtforms::bench::BenchReport;
use sqrtforms::synthesis::ExpandedPolynomial;
use sqrtforms::verify::VerificationReport;
use sqrtforms::SqrtOutcome;

#[derive(Debug, Serialize, Deserialize)]
pub struct SqrtReport {
    pub p: u64,
    pub a: u64,
    #[serde(flatten)]
    pub outcome: SqrtOutcome,
}

impl fmt::Display for SqrtReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "root: {}", self.outcome.root)?;
        writeln!(f, "coroot: {}", self.outcome.coroot)?;
        writeln!(f, "method: {}", self.outcome.method)?;
        write!(f, "mul_count: {}", self.outcome.mul_count)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ExpandReport {
    pub p: u64,
    pub k: u32,
    pub n: u64,
    pub polynomial: ExpandedPolynomial,
    pub degree: Option<u64>,
    pub expected_degree: u64,
    pub term_count: u64,
    pub term_bound: u64,
    pub pass: bool,
}

impl fmt::Display for ExpandReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.polynomial)?;
        let degree = self.degree.map_or("-".to_string(), |d| d.to_string());
        writeln!(f, "degree: {degree} (expected {})", self.expected_degree)?;
        writeln!(f, "terms: {} (at most {})", self.term_count, self.term_bound)?;
        f.write_str(if self.pass { "PASS" } else { "FAIL" })
    }
}

/// Writes `text` plus a trailing newline to `out`, or to stdout.
pub fn write_text(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n"))?,
        None => writeln!(std::io::stdout().lock(), "{text}")?,
    }
    Ok(())
}

pub fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> anyhow::Result<()> {
    write_text(&serde_json::to_string_pretty(value)?, out)
}

pub fn emit<T: Serialize + fmt::Display>(value: &T, json: bool, out: Option<&Path>) -> anyhow::Result<()> {
    if json {
        emit_json(value, out)
    } else {
        write_text(&value.to_string(), out)
    }
}

pub fn verify_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    let k = r.k_filter.map_or("any".to_string(), |k| k.to_string());
    let _ = writeln!(s, "method {} over primes in [{}, {}], k = {k}", r.method, r.pmin, r.pmax);
    for pr in &r.primes {
        if !pr.failures.is_empty() {
            let _ = writeln!(
                s,
                "  p = {} (k = {}, n = {}, z = {}): {} of {} residues FAILED",
                pr.p,
                pr.k,
                pr.n,
                pr.z,
                pr.failures.len(),
                pr.residues_checked
            );
        }
    }
    let _ = write!(
        s,
        "{} primes, {} residues checked, {} failures: {}",
        r.primes_tested,
        r.residues_checked,
        r.failure_count(),
        if r.passed { "PASS" } else { "FAIL" }
    );
    if let Some(ms) = r.wall_time_ms {
        let _ = write!(s, " ({ms} ms)");
    }
    s
}

pub fn density_text(r: &DensityReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "p = {}, k = {}, n = {}", r.p, r.k, r.n);
    let _ = writeln!(s, "quadratic residues: {}", r.qr_count);
    let _ = writeln!(
        s,
        "odd order:    {} = {} (predicted {})",
        r.odd_order_count, r.odd_order_fraction, r.predicted_odd_order_fraction
    );
    let predicted = r
        .predicted_exact_2k1_fraction
        .map_or("n/a".to_string(), |f| f.to_string());
    let _ = writeln!(
        s,
        "order 2^(k-1): {} = {} (predicted {predicted})",
        r.exact_2k1_order_count, r.exact_2k1_fraction
    );
    let _ = writeln!(s, "class histogram (t):      {:?}", r.class_histogram);
    let _ = write!(s, "multiplier histogram (e): {:?}", r.multiplier_histogram);
    s
}

pub fn trend_text(k: u32, rows: &[TrendRow]) -> String {
    let mut s = format!("k = {k}\n{:>8} {:>8} {:>14} {:>14} {:>10}", "p", "n", "order 2^(k-1)", "covered", "odd e");
    for r in rows {
        let _ = write!(
            s,
            "\n{:>8} {:>8} {:>14} {:>14} {:>10}",
            r.p,
            r.n,
            r.exact_2k1_fraction.to_string(),
            r.covered_fraction.to_string(),
            r.odd_multiplier_fraction.to_string()
        );
    }
    s
}

pub fn bench_text(r: &BenchReport) -> String {
    let mut s = format!(
        "p = {} (k = {}, n = {}), seed {}\n{:<8} {:>8} {:>12} {:>10} {:>6} {:>6} {:>9}",
        r.p, r.k, r.n, r.seed, "method", "trials", "total_muls", "mean", "min", "max", "distinct"
    );
    for rec in &r.records {
        let _ = write!(
            s,
            "\n{:<8} {:>8} {:>12} {:>10.2} {:>6} {:>6} {:>9}",
            rec.method.name(),
            rec.trials,
            rec.total_mul_count,
            rec.mean_mul_count,
            rec.min_mul_count,
            rec.max_mul_count,
            rec.distinct_mul_counts
        );
        if let Some(ns) = rec.wall_time_ns {
            let _ = write!(s, " {:>10} ns", ns);
        }
    }
    s
}
