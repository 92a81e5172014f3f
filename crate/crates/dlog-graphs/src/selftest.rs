//! Built-in consistency checks, exposed through the CLI.
//!
//! `quick` runs the oracle suites: the linear graph engine against the
//! quadratic reference on seeded random tables, the generating-function
//! means against brute-force enumeration, the quadrature constants, and
//! the class-count tables. `full` additionally sweeps p = 2027 end to end
//! and compares the permutation- and binary-class means against their
//! models (within 10%, reflecting finite-class fluctuation at ~1000 graphs
//! per class), and re-runs the sweep across worker counts to confirm
//! bit-identical output.

use crate::asymptotics::{
    binary_max_tail_constant, golomb_dickman, harmonic_number, max_cycle_coefficient,
    max_tail_coefficient, predict_binary,
};
use crate::enumerate::exhaustive_enumerate;
use crate::graph::{analyze, naive_analyze};
use crate::numtheory::PrimeContext;
use crate::series::{binary_graph_count, exact_mean, exact_mean_max_tail, MeanStatistic};
use crate::sweep::{pct_error, run_sweep, SweepConfig};
use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// How much of the suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelftestLevel {
    Quick,
    Full,
}

impl std::str::FromStr for SelftestLevel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quick" => Ok(SelftestLevel::Quick),
            "full" => Ok(SelftestLevel::Full),
            other => Err(format!("unknown selftest level {other:?}")),
        }
    }
}

/// One named check with its outcome.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Results of a selftest run.
#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub level: SelftestLevel,
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status}  {:<32} {}\n", c.name, c.detail));
        }
        let overall = if self.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{overall}  {} of {} checks passed\n",
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len()
        ));
        out
    }
}

struct Runner {
    checks: Vec<Check>,
}

impl Runner {
    fn record(&mut self, name: &'static str, passed: bool, detail: String) {
        self.checks.push(Check {
            name,
            passed,
            detail,
        });
    }
}

/// Run the suite at the given level.
pub fn selftest(level: SelftestLevel) -> SelftestReport {
    let mut r = Runner { checks: Vec::new() };

    engine_vs_oracle(&mut r);
    series_vs_exhaustive(&mut r);
    permutation_census(&mut r);
    constants(&mut r);
    class_count_tables(&mut r);
    image_node_theorem(&mut r);

    if level == SelftestLevel::Full {
        full_sweep_vs_models(&mut r);
        worker_count_determinism(&mut r);
    }

    SelftestReport {
        level,
        checks: r.checks,
    }
}

fn engine_vs_oracle(r: &mut Runner) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED_0001);
    for case in 0..1000u32 {
        let n = rng.gen_range(1..=200u32);
        let table: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=n)).collect();
        let fast = analyze(&table).unwrap();
        let slow = naive_analyze(&table).unwrap();
        if fast != slow {
            r.record(
                "engine vs quadratic oracle",
                false,
                format!("case {case} (n={n}) disagrees: {fast:?} vs {slow:?}; table {table:?}"),
            );
            return;
        }
    }
    r.record(
        "engine vs quadratic oracle",
        true,
        "1000 random tables (n <= 200) agree field-for-field".into(),
    );
}

fn big(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn series_vs_exhaustive(r: &mut Runner) {
    let mut failures = Vec::new();
    for n in [2u64, 4, 6] {
        let census = exhaustive_enumerate(n, 2).unwrap();
        if BigInt::from(census.count) != binary_graph_count(n) {
            failures.push(format!(
                "count mismatch at n={n}: {} vs {}",
                census.count,
                binary_graph_count(n)
            ));
        }
        let pairs = [
            (
                "components",
                exact_mean(MeanStatistic::Components, n).unwrap(),
                census.mean_components(),
            ),
            (
                "cyclic",
                exact_mean(MeanStatistic::CyclicNodes, n).unwrap(),
                census.mean_cyclic_nodes(),
            ),
            (
                "terminal",
                exact_mean(MeanStatistic::TerminalNodes, n).unwrap(),
                census.mean_terminal_nodes(),
            ),
            (
                "max tail",
                exact_mean_max_tail(n).unwrap(),
                census.mean_max_tail(),
            ),
        ];
        for (what, series, brute) in pairs {
            if series != brute {
                failures.push(format!("{what} at n={n}: series {series} vs brute {brute}"));
            }
        }
    }
    r.record(
        "series vs exhaustive enumeration",
        failures.is_empty(),
        if failures.is_empty() {
            "binary n in {2,4,6}: counts and all exact means agree".into()
        } else {
            failures.join("; ")
        },
    );
}

fn permutation_census(r: &mut Runner) {
    let mut failures = Vec::new();
    for n in [2u64, 3, 4, 5] {
        let census = exhaustive_enumerate(n, 1).unwrap();
        let h: BigRational = (1..=n).map(|i| big(1) / big(i)).sum();
        if census.mean_components() != h {
            failures.push(format!("components at n={n}"));
        }
        let avg = BigRational::new(BigInt::from(n + 1), BigInt::from(2));
        if census.mean_avg_cycle() != avg {
            failures.push(format!("avg cycle at n={n}"));
        }
        if census.count != (1..=n).product::<u64>() {
            failures.push(format!("count at n={n}"));
        }
    }
    r.record(
        "permutation census vs exact laws",
        failures.is_empty(),
        if failures.is_empty() {
            "components = H_n and avg cycle = (n+1)/2, exactly, for n <= 5".into()
        } else {
            failures.join("; ")
        },
    );
}

fn constants(r: &mut Runner) {
    let lam7 = match golomb_dickman(1e-7) {
        Ok(v) => v,
        Err(e) => {
            r.record("quadrature constants", false, e.to_string());
            return;
        }
    };
    let lam9 = golomb_dickman(1e-9).unwrap();
    let mut failures = Vec::new();
    if (lam7 - lam9).abs() > 1e-7 {
        failures.push(format!(
            "tolerance refinement moved lambda by {}",
            lam7 - lam9
        ));
    }
    // The printed 8-digit value in the source material is itself only
    // accurate to ~3.4e-7, so the check band is 5e-7 rather than 1e-7.
    if (lam7 - 0.624_329_65).abs() > 5e-7 {
        failures.push(format!("lambda {lam7} vs printed 0.62432965"));
    }
    if (max_cycle_coefficient() - 0.78248).abs() > 5e-5 {
        failures.push("max-cycle coefficient".into());
    }
    if (max_tail_coefficient() - 1.73746).abs() > 5e-5 {
        failures.push("max-tail coefficient".into());
    }
    if (binary_max_tail_constant() - -1.61371).abs() > 5e-5 {
        failures.push("binary max-tail constant".into());
    }
    r.record(
        "quadrature constants",
        failures.is_empty(),
        if failures.is_empty() {
            format!("lambda = {lam7:.9}, derived coefficients match printed values")
        } else {
            failures.join("; ")
        },
    );
}

fn class_count_tables(r: &mut Runner) {
    let expected: [(u64, u64, u64); 3] = [
        (100_043, 50_020, 50_020),
        (100_057, 30_240, 15_120),
        (106_261, 21_120, 10_560),
    ];
    let mut failures = Vec::new();
    for (p, perms, bins) in expected {
        let ctx = PrimeContext::new(p).unwrap();
        if ctx.count_m_ary(1).unwrap() != perms || ctx.count_m_ary(2).unwrap() != bins {
            failures.push(format!("p={p}"));
        }
        let total: u64 = ctx.class_counts().map(|(_, c)| c).sum();
        if total != p - 1 {
            failures.push(format!("p={p} total {total}"));
        }
    }
    r.record(
        "class count tables",
        failures.is_empty(),
        if failures.is_empty() {
            "permutation/binary counts match for all three experiment primes".into()
        } else {
            failures.join("; ")
        },
    );
}

fn image_node_theorem(r: &mut Runner) {
    let ctx = PrimeContext::new(211).unwrap();
    for g in 1..211u64 {
        let m = crate::numtheory::classify_m(g, &ctx).unwrap();
        let map = crate::numtheory::build_map(g, &ctx).unwrap();
        let stats = analyze(map.table()).unwrap();
        if stats.image_nodes != 210 / m {
            r.record(
                "image node theorem (p = 211)",
                false,
                format!("g={g}: image {} vs (p-1)/m {}", stats.image_nodes, 210 / m),
            );
            return;
        }
    }
    r.record(
        "image node theorem (p = 211)",
        true,
        "every g has exactly (p-1)/m image nodes".into(),
    );
}

fn full_sweep_vs_models(r: &mut Runner) {
    let res = run_sweep(&SweepConfig::new(2027)).unwrap();
    let mut failures = Vec::new();

    let perm = &res.per_class[&1];
    let h = harmonic_number(2026);
    for (what, observed, predicted) in [
        ("components", perm.mean_components(), h),
        ("avg cycle", perm.mean_avg_cycle(), 2027.0 / 2.0),
        (
            "max cycle",
            perm.mean_max_cycle(),
            golomb_dickman(1e-9).unwrap() * 2026.0,
        ),
    ] {
        let err = pct_error(observed, predicted);
        if err > 10.0 {
            failures.push(format!("permutation {what}: {err:.2}% off"));
        }
    }

    let binary = &res.per_class[&2];
    let pred = predict_binary(2026).unwrap();
    for (what, observed, predicted) in [
        ("components", binary.mean_components(), pred.components),
        ("cyclic", binary.mean_cyclic_nodes(), pred.cyclic_nodes),
        ("avg cycle", binary.mean_avg_cycle(), pred.avg_cycle),
        ("avg tail", binary.mean_avg_tail(), pred.avg_tail),
    ] {
        let err = pct_error(observed, predicted);
        if err > 10.0 {
            failures.push(format!("binary {what}: {err:.2}% off"));
        }
    }

    r.record(
        "p = 2027 sweep vs models",
        failures.is_empty(),
        if failures.is_empty() {
            "permutation and binary class means within 10% of their models".into()
        } else {
            failures.join("; ")
        },
    );
}

fn worker_count_determinism(r: &mut Runner) {
    let base = run_sweep(&SweepConfig {
        workers: 1,
        ..SweepConfig::new(2027)
    })
    .unwrap();
    for workers in [4usize, 8] {
        let other = run_sweep(&SweepConfig {
            workers,
            ..SweepConfig::new(2027)
        })
        .unwrap();
        if other != base {
            r.record(
                "worker count determinism",
                false,
                format!("workers={workers} output differs from workers=1"),
            );
            return;
        }
    }
    r.record(
        "worker count determinism",
        true,
        "p = 2027 sweep is bit-identical across 1, 4, 8 workers".into(),
    );
}
