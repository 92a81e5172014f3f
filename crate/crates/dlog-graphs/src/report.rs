//! Human-readable sweep reports: per-prime class census, observed-vs-model
//! comparison tables for the combined, permutation, and binary classes,
//! and the extremal observations.

use crate::sweep::{ClassFilter, ClassSummary, FieldComparison, SweepResult};

/// Output style for [`render_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "markdown" => Ok(ReportFormat::Markdown),
            other => Err(format!("unknown report format {other:?}")),
        }
    }
}

const DISPLAY_NAMES: [(&str, &str); 7] = [
    ("components", "Components"),
    ("cyclic_nodes", "Cyclic Nodes"),
    ("image_nodes", "Image Nodes"),
    ("avg_cycle", "Avg Cycle"),
    ("avg_tail", "Avg Tail"),
    ("max_cycle", "Max Cycle"),
    ("max_tail", "Max Tail"),
];

fn display_name(field: &str) -> &'static str {
    DISPLAY_NAMES
        .iter()
        .find(|(f, _)| *f == field)
        .map(|(_, d)| *d)
        .unwrap_or("?")
}

fn fmt_pct(pct: f64) -> String {
    if pct.is_infinite() {
        "inf".to_string()
    } else {
        format!("{pct:.3}%")
    }
}

/// Render reports for one or more sweeps.
pub fn render_report(results: &[SweepResult], format: ReportFormat) -> String {
    let mut out = String::new();
    for res in results {
        render_one(&mut out, res, format);
        out.push('\n');
    }
    out
}

fn factored(n: u64) -> String {
    crate::numtheory::factorize(n)
        .into_iter()
        .map(|(p, e)| {
            if e == 1 {
                p.to_string()
            } else {
                format!("{p}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join(" * ")
}

fn render_one(out: &mut String, res: &SweepResult, format: ReportFormat) {
    use std::fmt::Write;

    let md = format == ReportFormat::Markdown;
    if md {
        let _ = writeln!(out, "## p = {} (p - 1 = {})", res.p, factored(res.n));
    } else {
        let _ = writeln!(out, "== p = {} (p - 1 = {}) ==", res.p, factored(res.n));
    }
    if !res.complete {
        let filter = match &res.classes {
            ClassFilter::All => "all".to_string(),
            ClassFilter::Only(ms) => ms
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join(","),
        };
        let _ = writeln!(
            out,
            "PARTIAL SWEEP: {}/{} chunks done, g in {}..={}, classes {}",
            res.chunks_done, res.chunks_total, res.g_start, res.g_end, filter
        );
    }
    out.push('\n');

    // class census
    if md {
        let _ = writeln!(out, "| m | graphs |\n|---:|---:|");
        for (m, s) in &res.per_class {
            let _ = writeln!(out, "| {m} | {} |", s.graph_count());
        }
        let _ = writeln!(out, "| total | {} |", res.processed);
    } else {
        let _ = writeln!(out, "{:>10}  {:>10}", "m", "graphs");
        for (m, s) in &res.per_class {
            let _ = writeln!(out, "{:>10}  {:>10}", m, s.graph_count());
        }
        let _ = writeln!(out, "{:>10}  {:>10}", "total", res.processed);
    }
    out.push('\n');

    let sections: [(&str, Option<&ClassSummary>, &[&str]); 3] = [
        (
            "Combined over all graphs vs random functional graph model",
            Some(&res.combined),
            &DISPLAY_NAMES.map(|(f, _)| f)[..],
        ),
        (
            "Permutations (m = 1) vs random permutation model",
            res.per_class.get(&1),
            &["components", "avg_cycle", "max_cycle"],
        ),
        (
            "Binary functional graphs (m = 2) vs random binary model",
            res.per_class.get(&2),
            &DISPLAY_NAMES.map(|(f, _)| f)[..],
        ),
    ];

    for (title, summary, fields) in sections {
        let Some(summary) = summary else { continue };
        if summary.graph_count() == 0 {
            continue;
        }
        let Some(comparisons) = summary.comparisons() else {
            continue;
        };
        if md {
            let _ = writeln!(out, "### {title}");
            let _ = writeln!(
                out,
                "| statistic | observed | predicted | error |\n|---|---:|---:|---:|"
            );
        } else {
            let _ = writeln!(out, "{title}:");
            let _ = writeln!(
                out,
                "  {:<14} {:>14} {:>14} {:>12}",
                "statistic", "observed", "predicted", "error"
            );
        }
        for c in comparisons.iter().filter(|c| fields.contains(&c.field)) {
            render_row(out, c, md);
        }
        out.push('\n');
    }

    // extremal section
    let ext = &res.extremal;
    let witnesses = |ws: &[u64]| {
        ws.iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    if md {
        let _ = writeln!(out, "### Extremal observations");
    } else {
        let _ = writeln!(out, "Extremal observations:");
    }
    let bullet = if md { "- " } else { "  " };
    let _ = writeln!(
        out,
        "{bullet}longest cycle {} at g = {}",
        ext.longest_cycle.value,
        witnesses(&ext.longest_cycle.witnesses)
    );
    let _ = writeln!(
        out,
        "{bullet}longest tail {} at g = {}",
        ext.longest_tail.value,
        witnesses(&ext.longest_tail.witnesses)
    );
    let _ = writeln!(
        out,
        "{bullet}graphs with no cycle longer than a fixed point: {} (g = {})",
        ext.unit_cycle_witnesses.len(),
        witnesses(&ext.unit_cycle_witnesses)
    );
}

fn render_row(out: &mut String, c: &FieldComparison, md: bool) {
    use std::fmt::Write;
    let name = display_name(c.field);
    if md {
        let _ = writeln!(
            out,
            "| {name} | {:.3} | {:.3} | {} |",
            c.observed,
            c.predicted,
            fmt_pct(c.pct_error)
        );
    } else {
        let _ = writeln!(
            out,
            "  {:<14} {:>14.3} {:>14.3} {:>12}",
            name,
            c.observed,
            c.predicted,
            fmt_pct(c.pct_error)
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{run_sweep, SweepConfig};

    #[test]
    fn text_report_has_all_sections() {
        let res = run_sweep(&SweepConfig::new(211)).unwrap();
        let report = render_report(&[res], ReportFormat::Text);
        assert!(report.contains("== p = 211 (p - 1 = 2 * 3 * 5 * 7) =="));
        assert!(report.contains("Combined over all graphs"));
        assert!(report.contains("Permutations (m = 1)"));
        assert!(report.contains("Binary functional graphs (m = 2)"));
        assert!(report.contains("longest cycle"));
        assert!(report.contains("no cycle longer than a fixed point"));
        assert!(!report.contains("PARTIAL"));
    }

    #[test]
    fn partial_sweeps_are_labeled() {
        let cfg = SweepConfig {
            g_range: Some((1, 100)),
            ..SweepConfig::new(211)
        };
        let res = run_sweep(&cfg).unwrap();
        let report = render_report(&[res], ReportFormat::Text);
        assert!(report.contains("PARTIAL SWEEP"));
    }

    #[test]
    fn markdown_report_renders_tables() {
        let res = run_sweep(&SweepConfig::new(211)).unwrap();
        let report = render_report(&[res], ReportFormat::Markdown);
        assert!(report.contains("## p = 211"));
        assert!(report.contains("| statistic | observed | predicted | error |"));
        assert!(report.contains("| Components |"));
    }
}
