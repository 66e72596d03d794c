//! `sqrtforms`: compute, synthesize, expand and verify polynomial square
//! roots modulo primes.
//!
//! Exit codes: 0 success, 1 usage error or failed verification, 2 the input
//! is not a quadratic residue.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context as _};
use clap::{Args, Parser, Subcommand, ValueEnum};

use sqrtforms::analysis::{density_trend, order_census_with};
use sqrtforms::bench::{run_bench, BenchConfig};
use sqrtforms::synthesis::{self, expand, expected_degree, degree_check, render, Format};
use sqrtforms::verify::{verify_range, verify_range_with, VerifyConfig};
use sqrtforms::{sqrt_auto, sqrt_with, Error, Execution, Method, PrimeContext};

use output::{emit_json, ExpandReport, SqrtReport};

#[derive(Parser)]
#[command(name = "sqrtforms", version, about = "Polynomial square roots modulo primes p = 2^k*n + 1")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Square root of one residue.
    Sqrt(SqrtArgs),
    /// Print the closed form for a 2-adicity k.
    Synthesize(SynthesizeArgs),
    /// Check every quadratic residue of every prime in a range against brute force.
    Verify(VerifyArgs),
    /// Multiply out the closed form for p and check its degree and length.
    Expand(ExpandArgs),
    /// Exact order-class census of the residues of p.
    Density(DensityArgs),
    /// Multiplication counts per method over seeded residue samples.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    F1,
    F2,
    F3,
    F4,
    Synth,
    Tonelli,
    Direct,
    Brute,
}

impl MethodArg {
    fn method(self) -> Option<Method> {
        Some(match self {
            MethodArg::Auto => return None,
            MethodArg::F1 => Method::F1,
            MethodArg::F2 => Method::F2,
            MethodArg::F3 => Method::F3,
            MethodArg::F4 => Method::F4,
            MethodArg::Synth => Method::Synth,
            MethodArg::Tonelli => Method::Tonelli,
            MethodArg::Direct => Method::Direct,
            MethodArg::Brute => Method::Brute,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormulaFormat {
    Text,
    Structured,
    Math,
}

#[derive(Args)]
struct SqrtArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    a: u64,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
}

#[derive(Args)]
struct SynthesizeArgs {
    #[arg(long)]
    k: u32,
    #[arg(long, value_enum, default_value = "text")]
    format: FormulaFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 3)]
    pmin: u64,
    #[arg(long)]
    pmax: u64,
    /// Only primes with v2(p - 1) = K.
    #[arg(long)]
    k: Option<u32>,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Include wall time in the report.
    #[arg(long)]
    timing: bool,
    /// Run on the calling thread only.
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Verify a deliberately corrupted formula instead (exit-code self-test).
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args)]
struct ExpandArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DensityArgs {
    /// Census of a single prime.
    #[arg(long, required_unless_present = "trend_k", conflicts_with = "trend_k")]
    p: Option<u64>,
    /// Census every prime up to --pmax with this 2-adicity instead.
    #[arg(long, requires = "pmax")]
    trend_k: Option<u32>,
    #[arg(long)]
    pmax: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Comma-separated; defaults to the class formula, synth, tonelli and direct.
    #[arg(long, value_enum, value_delimiter = ',')]
    methods: Vec<MethodArg>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    timing: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn cmd_sqrt(args: &SqrtArgs) -> anyhow::Result<ExitCode> {
    let ctx = PrimeContext::new(args.p)?;
    let result = match args.method.method() {
        None => sqrt_auto(&ctx, args.a),
        Some(m) => sqrt_with(m, &ctx, args.a),
    };
    match result {
        Ok(outcome) => {
            let report = SqrtReport { p: args.p, a: args.a, outcome };
            output::emit(&report, args.format == OutputFormat::Json, None)?;
            Ok(ExitCode::SUCCESS)
        }
        Err(Error::NotAResidue { a, p }) => {
            eprintln!("{a} is not a quadratic residue mod {p}");
            Ok(ExitCode::from(2))
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_synthesize(args: &SynthesizeArgs) -> anyhow::Result<ExitCode> {
    let formula = synthesis::synthesize(args.k)?;
    let format = match args.format {
        FormulaFormat::Text => Format::Text,
        FormulaFormat::Structured => Format::Structured,
        FormulaFormat::Math => Format::Math,
    };
    output::write_text(&render(&formula, format), args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

/// A copy of each synthesized formula with one factor exponent shifted.
fn faulty_solver() -> impl Fn(&PrimeContext, u64) -> sqrtforms::Result<sqrtforms::SqrtOutcome> + Sync {
    let broken: Vec<Option<synthesis::SymbolicFormula>> = (0..=synthesis::MAX_K)
        .map(|k| {
            (k >= 2).then(|| {
                let good = synthesis::synthesize(k).expect("k in range");
                let mut term = good.terms()[1].clone();
                let last = term.factors.len() - 1;
                term.factors[last].z_exp = (term.factors[last].z_exp + 1) % (1 << k);
                good.with_term_unchecked(1, term)
            })
        })
        .collect();
    move |ctx: &PrimeContext, a: u64| match broken.get(ctx.two_adicity() as usize) {
        Some(Some(f)) => synthesis::evaluate(f, ctx, a),
        _ => sqrt_auto(ctx, a),
    }
}

fn cmd_verify(args: &VerifyArgs) -> anyhow::Result<ExitCode> {
    let cfg = VerifyConfig {
        pmin: args.pmin,
        pmax: args.pmax,
        k_filter: args.k,
        method: args.method.method(),
    };
    let exec = execution(args.sequential);
    let start = Instant::now();
    let mut report = if args.inject_fault {
        verify_range_with(&cfg, exec, &faulty_solver())?
    } else {
        verify_range(&cfg, exec)?
    };
    if args.timing {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    if args.format == OutputFormat::Json {
        emit_json(&report, args.out.as_deref())?;
    } else {
        output::write_text(&output::verify_text(&report), args.out.as_deref())?;
    }
    if !report.passed {
        eprintln!("verification failed: {} failing residues", report.failure_count());
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_expand(args: &ExpandArgs) -> anyhow::Result<ExitCode> {
    let ctx = PrimeContext::new(args.p)?;
    let formula = synthesis::cached(ctx.two_adicity())?;
    let poly = expand(formula, &ctx)?;
    let report = ExpandReport {
        p: ctx.p(),
        k: ctx.two_adicity(),
        n: ctx.odd_part(),
        degree: poly.degree(),
        expected_degree: expected_degree(&ctx).context("degree overflows")?,
        term_count: poly.len() as u64,
        term_bound: ctx.class_count(),
        pass: degree_check(&poly, &ctx),
        polynomial: poly,
    };
    output::emit(&report, args.format == OutputFormat::Json, args.out.as_deref())?;
    Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn cmd_density(args: &DensityArgs) -> anyhow::Result<ExitCode> {
    let exec = execution(args.sequential);
    let json = args.format == OutputFormat::Json;
    match (args.p, args.trend_k) {
        (Some(p), _) => {
            let report = order_census_with(&PrimeContext::new(p)?, exec)?;
            if json {
                emit_json(&report, args.out.as_deref())?;
            } else {
                output::write_text(&output::density_text(&report), args.out.as_deref())?;
            }
        }
        (None, Some(k)) => {
            let pmax = args.pmax.context("--trend-k needs --pmax")?;
            let rows = density_trend(k, pmax, exec)?;
            if json {
                emit_json(&rows, args.out.as_deref())?;
            } else {
                output::write_text(&output::trend_text(k, &rows), args.out.as_deref())?;
            }
        }
        (None, None) => bail!("either --p or --trend-k is required"),
    }
    Ok(ExitCode::SUCCESS)
}

fn default_methods(k: u32) -> Vec<Method> {
    let mut methods = vec![auto_method(k)];
    if k <= 4 {
        methods.push(Method::Synth);
    }
    methods.extend([Method::Tonelli, Method::Direct]);
    methods
}

/// The method `sqrt_auto` dispatches to for 2-adicity `k`.
fn auto_method(k: u32) -> Method {
    match k {
        1 => Method::F1,
        2 => Method::F2,
        3 => Method::F3,
        4 => Method::F4,
        k if k <= synthesis::MAX_K => Method::Synth,
        _ => Method::Direct,
    }
}

fn cmd_bench(args: &BenchArgs) -> anyhow::Result<ExitCode> {
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let ctx = PrimeContext::new(args.p)?;
    let methods = if args.methods.is_empty() {
        default_methods(ctx.two_adicity())
    } else {
        args.methods
            .iter()
            .map(|m| m.method().unwrap_or_else(|| auto_method(ctx.two_adicity())))
            .collect()
    };
    let report = run_bench(&BenchConfig {
        p: args.p,
        trials: args.trials,
        methods,
        seed: args.seed,
        timing: args.timing,
    })?;
    if args.format == OutputFormat::Json {
        emit_json(&report, args.out.as_deref())?;
    } else {
        output::write_text(&output::bench_text(&report), args.out.as_deref())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Sqrt(a) => cmd_sqrt(a),
        Command::Synthesize(a) => cmd_synthesize(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Expand(a) => cmd_expand(a),
        Command::Density(a) => cmd_density(a),
        Command::Bench(a) => cmd_bench(a),
    };
    result.unwrap_or_else(|e| {
        // a closed pipe (e.g. `| head`) is not worth reporting
        let broken_pipe = e
            .downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe);
        if broken_pipe {
            return ExitCode::SUCCESS;
        }
        eprintln!("error: {e:#}");
        ExitCode::FAILURE
    })
}
