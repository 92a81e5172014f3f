//! `dlog-sweep`: exhaustively map the functional graphs of `x -> g^x mod p`.
//!
//! Subcommands:
//!   sweep      run the experiment over all bases of one or more primes
//!   predict    print the theoretical statistics of a model at size n
//!   selftest   run the built-in oracle suites
//!   constants  evaluate the quadrature constants

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use dlog_graphs::asymptotics::{
    binary_max_tail_constant, golomb_dickman, max_cycle_coefficient, max_tail_coefficient,
    predict_binary, predict_permutation, predict_random, Model, Prediction, EULER_GAMMA,
};
use dlog_graphs::output::{emit_outputs, OutputFormat};
use dlog_graphs::report::{render_report, ReportFormat};
use dlog_graphs::selftest::{selftest, SelftestLevel};
use dlog_graphs::sweep::{run_sweep, ClassFilter, SweepConfig, SweepResult};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "dlog-sweep", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sweep every base g of the given primes and report per-class
    /// statistics against the theoretical models.
    Sweep(SweepArgs),
    /// Print the theoretical statistics of one model at size n.
    Predict {
        /// random | permutation | binary
        #[arg(long)]
        model: String,
        /// Graph size (p - 1 when comparing against a sweep).
        #[arg(long)]
        n: u64,
    },
    /// Run the built-in consistency checks.
    Selftest {
        /// quick | full (full adds a complete p = 2027 sweep)
        #[arg(long, default_value = "quick")]
        level: String,
    },
    /// Evaluate the longest-cycle integral and derived constants.
    Constants {
        /// Absolute quadrature tolerance (>= 1e-10).
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// Prime modulus; repeatable.
    #[arg(long = "prime")]
    primes: Vec<u64>,
    /// File with one prime per line (# starts a comment).
    #[arg(long)]
    primes_file: Option<PathBuf>,
    /// First base of the sweep (default 1).
    #[arg(long)]
    g_start: Option<u64>,
    /// Last base of the sweep (default p - 1).
    #[arg(long)]
    g_end: Option<u64>,
    /// "all" or a comma-separated list of m-classes to analyze.
    #[arg(long, default_value = "all")]
    class: String,
    /// Worker threads (0 = machine parallelism). The result never
    /// depends on this value.
    #[arg(long, env = "DLOG_SWEEP_WORKERS", default_value_t = 0)]
    workers: usize,
    /// Checkpoint file for resumable sweeps (suffixed with the prime when
    /// sweeping several).
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Process at most this many chunks now and checkpoint the rest.
    #[arg(long)]
    chunk_budget: Option<usize>,
    /// Directory for machine-readable outputs.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
    /// text | markdown
    #[arg(long, default_value = "text")]
    report: String,
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().cmd {
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Predict { model, n } => cmd_predict(&model, n),
        Cmd::Selftest { level } => cmd_selftest(&level),
        Cmd::Constants { tol } => cmd_constants(tol),
    }
}

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<()> {
    let mut primes = args.primes.clone();
    if let Some(path) = &args.primes_file {
        let body = std::fs::read_to_string(path)
            .with_context(|| format!("reading primes file {}", path.display()))?;
        for line in body.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                primes.push(
                    line.parse()
                        .with_context(|| format!("bad prime {line:?}"))?,
                );
            }
        }
    }
    if primes.is_empty() {
        bail!("no primes given; use --prime or --primes-file");
    }

    let classes = parse_class_filter(&args.class)?;
    let format: OutputFormat = args.format.parse().map_err(anyhow::Error::msg)?;
    let report_format: ReportFormat = args.report.parse().map_err(anyhow::Error::msg)?;

    let g_range = match (args.g_start, args.g_end) {
        (None, None) => None,
        (start, end) => Some((start.unwrap_or(1), end.unwrap_or(0))),
    };

    let multi = primes.len() > 1;
    let mut results: Vec<SweepResult> = Vec::new();
    for &p in &primes {
        let checkpoint = args.checkpoint.as_ref().map(|path| {
            if multi {
                path.with_extension(format!("{p}.json"))
            } else {
                path.clone()
            }
        });
        let g_range = g_range.map(|(s, e)| (s, if e == 0 { p - 1 } else { e }));
        let cfg = SweepConfig {
            p,
            g_range,
            classes: classes.clone(),
            workers: args.workers,
            checkpoint,
            chunk_budget: args.chunk_budget,
        };
        eprintln!("sweeping p = {p} ...");
        let started = std::time::Instant::now();
        let res = run_sweep(&cfg)?;
        eprintln!(
            "p = {p}: {} graphs in {:.1}s ({}/{} chunks)",
            res.processed,
            started.elapsed().as_secs_f64(),
            res.chunks_done,
            res.chunks_total
        );
        results.push(res);
    }

    print!("{}", render_report(&results, report_format));

    if let Some(dir) = &args.out {
        let files = emit_outputs(&results, dir, format)?;
        for f in files {
            eprintln!("wrote {}", f.display());
        }
    }
    Ok(())
}

fn parse_class_filter(spec: &str) -> anyhow::Result<ClassFilter> {
    if spec == "all" {
        return Ok(ClassFilter::All);
    }
    let classes = spec
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .with_context(|| format!("bad class {part:?}"))
        })
        .collect::<anyhow::Result<Vec<u64>>>()?;
    if classes.is_empty() || classes.contains(&0) {
        bail!("class filter must list divisors m >= 1, or \"all\"");
    }
    Ok(ClassFilter::only(classes))
}

fn cmd_predict(model: &str, n: u64) -> anyhow::Result<()> {
    let model: Model = model.parse().map_err(anyhow::Error::msg)?;
    let pred: Prediction = match model {
        Model::Random => predict_random(n),
        Model::Permutation => predict_permutation(n),
        Model::Binary => predict_binary(n)?,
    };
    println!("model {}  n {}", pred.model.name(), pred.n);
    for (name, value) in [
        ("components", pred.components),
        ("cyclic_nodes", pred.cyclic_nodes),
        ("tail_nodes", pred.tail_nodes),
        ("terminal_nodes", pred.terminal_nodes),
        ("image_nodes", pred.image_nodes),
        ("avg_cycle", pred.avg_cycle),
        ("avg_tail", pred.avg_tail),
        ("max_cycle", pred.max_cycle),
        ("max_tail", pred.max_tail),
    ] {
        println!("{name:<16} {value:.6}");
    }
    Ok(())
}

fn cmd_selftest(level: &str) -> anyhow::Result<()> {
    let level: SelftestLevel = level.parse().map_err(anyhow::Error::msg)?;
    let report = selftest(level);
    print!("{}", report.render());
    if !report.passed() {
        std::process::exit(1);
    }
    Ok(())
}

fn cmd_constants(tol: f64) -> anyhow::Result<()> {
    let lambda = golomb_dickman(tol)?;
    println!("golomb_dickman      {lambda:.10}   (tol {tol:e})");
    println!("sqrt(pi/2)*lambda   {:.10}", max_cycle_coefficient());
    println!("sqrt(2pi)*ln2       {:.10}", max_tail_coefficient());
    println!("-3+2ln2             {:.10}", binary_max_tail_constant());
    println!("euler_gamma         {EULER_GAMMA:.10}");
    Ok(())
}
