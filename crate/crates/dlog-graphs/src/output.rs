//! Machine-readable sweep outputs.
//!
//! CSV: `summaries.csv` holds one row per `(p, m)` including the combined
//! census as `m = 0`, with observed means, predictions, and percent errors
//! printed to 6 decimal places (round-half-even); `extremal.csv` holds one
//! row per extremal statistic with semicolon-separated witnesses.
//!
//! JSON: `sweep.json` mirrors the same fields hierarchically and also
//! carries the exact integer sums, so summaries can be re-aggregated
//! losslessly.

use crate::sweep::{ClassSummary, SweepResult};
use crate::{Error, Result};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Structured output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown output format {other:?}")),
        }
    }
}

/// Format a mean/prediction/error cell: 6 decimals, round-half-even
/// (Rust's default float formatting), empty for unmodeled classes.
fn cell(v: Option<f64>) -> String {
    match v {
        Some(v) if v.is_finite() => format!("{v:.6}"),
        Some(_) => "inf".to_string(),
        None => String::new(),
    }
}

fn summary_row(s: &ClassSummary) -> String {
    let comparisons = s.comparisons();
    let observed = [
        s.mean_components(),
        s.mean_cyclic_nodes(),
        s.mean_image_nodes(),
        s.mean_avg_cycle(),
        s.mean_avg_tail(),
        s.mean_max_cycle(),
        s.mean_max_tail(),
    ];
    let mut row = format!("{},{},{}", s.p, s.m, s.graph_count());
    for v in observed {
        row.push(',');
        row.push_str(&cell(Some(v)));
    }
    for i in 0..7 {
        row.push(',');
        row.push_str(&cell(comparisons.as_ref().map(|c| c[i].predicted)));
    }
    for i in 0..7 {
        row.push(',');
        row.push_str(&cell(comparisons.as_ref().map(|c| c[i].pct_error)));
    }
    row
}

const SUMMARY_HEADER: &str = "p,m,graph_count,\
mean_components,mean_cyclic,mean_image,mean_avg_cycle,mean_avg_tail,mean_max_cycle,mean_max_tail,\
predicted_components,predicted_cyclic,predicted_image,predicted_avg_cycle,predicted_avg_tail,predicted_max_cycle,predicted_max_tail,\
pct_error_components,pct_error_cyclic,pct_error_image,pct_error_avg_cycle,pct_error_avg_tail,pct_error_max_cycle,pct_error_max_tail";

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(contents.as_bytes())
        .map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Write sweep results under `dir`; returns the created file paths.
pub fn emit_outputs(
    results: &[SweepResult],
    dir: &Path,
    format: OutputFormat,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    match format {
        OutputFormat::Csv => {
            let mut summaries = String::from(SUMMARY_HEADER);
            summaries.push('\n');
            for res in results {
                for s in res.all_summaries() {
                    summaries.push_str(&summary_row(s));
                    summaries.push('\n');
                }
            }

            let mut extremal = String::from("p,statistic,value,witnesses\n");
            for res in results {
                let ext = &res.extremal;
                let join = |ws: &[u64]| {
                    ws.iter()
                        .map(|g| g.to_string())
                        .collect::<Vec<_>>()
                        .join(";")
                };
                extremal.push_str(&format!(
                    "{},longest_cycle,{},{}\n",
                    res.p,
                    ext.longest_cycle.value,
                    join(&ext.longest_cycle.witnesses)
                ));
                extremal.push_str(&format!(
                    "{},longest_tail,{},{}\n",
                    res.p,
                    ext.longest_tail.value,
                    join(&ext.longest_tail.witnesses)
                ));
                extremal.push_str(&format!(
                    "{},max_cycle_equals_one,{},{}\n",
                    res.p,
                    ext.unit_cycle_witnesses.len(),
                    join(&ext.unit_cycle_witnesses)
                ));
            }

            let summaries_path = dir.join("summaries.csv");
            let extremal_path = dir.join("extremal.csv");
            write_file(&summaries_path, &summaries)?;
            write_file(&extremal_path, &extremal)?;
            Ok(vec![summaries_path, extremal_path])
        }
        OutputFormat::Json => {
            let docs: Vec<serde_json::Value> = results.iter().map(json_document).collect();
            let path = dir.join("sweep.json");
            let body = serde_json::to_string_pretty(&docs).expect("results serialize");
            write_file(&path, &body)?;
            Ok(vec![path])
        }
    }
}

fn json_document(res: &SweepResult) -> serde_json::Value {
    let classes: Vec<serde_json::Value> = res
        .all_summaries()
        .map(|s| {
            let comparison = s.comparisons().map(|cs| {
                cs.into_iter()
                    .map(|c| {
                        serde_json::json!({
                            "field": c.field,
                            "observed": c.observed,
                            "predicted": c.predicted,
                            "pct_error": if c.pct_error.is_finite() {
                                serde_json::json!(c.pct_error)
                            } else {
                                serde_json::json!("inf")
                            },
                        })
                    })
                    .collect::<Vec<_>>()
            });
            serde_json::json!({
                "m": s.m,
                "graph_count": s.graph_count(),
                "means": {
                    "components": s.mean_components(),
                    "cyclic_nodes": s.mean_cyclic_nodes(),
                    "image_nodes": s.mean_image_nodes(),
                    "avg_cycle": s.mean_avg_cycle(),
                    "avg_tail": s.mean_avg_tail(),
                    "max_cycle": s.mean_max_cycle(),
                    "max_tail": s.mean_max_tail(),
                },
                "sums": s.sums,
                "comparison": comparison,
            })
        })
        .collect();
    serde_json::json!({
        "p": res.p,
        "n": res.n,
        "g_start": res.g_start,
        "g_end": res.g_end,
        "complete": res.complete,
        "chunks_done": res.chunks_done,
        "chunks_total": res.chunks_total,
        "classes": classes,
        "extremal": {
            "longest_cycle": res.extremal.longest_cycle,
            "longest_tail": res.extremal.longest_tail,
            "max_cycle_equals_one": {
                "count": res.extremal.unit_cycle_witnesses.len(),
                "witnesses": res.extremal.unit_cycle_witnesses,
            },
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{run_sweep, SweepConfig};

    #[test]
    fn six_decimal_cells_round_half_even() {
        // dyadic ties: 0.078125 = 5/64 exactly, tie at the 5th decimal
        assert_eq!(format!("{:.5}", 0.078125f64), "0.07812");
        assert_eq!(format!("{:.5}", 0.046875f64), "0.04688");
        assert_eq!(format!("{:.0}", 2.5f64), "2");
        assert_eq!(format!("{:.0}", 3.5f64), "4");
        assert_eq!(cell(Some(105.0)), "105.000000");
        assert_eq!(cell(None), "");
        assert_eq!(cell(Some(f64::INFINITY)), "inf");
    }

    #[test]
    fn csv_layout() {
        let res = run_sweep(&SweepConfig::new(211)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let files = emit_outputs(&[res], dir.path(), OutputFormat::Csv).unwrap();
        assert_eq!(files.len(), 2);

        let summaries = std::fs::read_to_string(&files[0]).unwrap();
        let mut lines = summaries.lines();
        assert_eq!(lines.next().unwrap(), SUMMARY_HEADER);
        // combined row first: m = 0, 210 graphs
        let combined = lines.next().unwrap();
        assert!(combined.starts_with("211,0,210,"));
        assert_eq!(combined.split(',').count(), 24);
        // binary class mean image nodes is exactly (p-1)/2, with a
        // percent error of exactly zero against the model
        let binary = summaries.lines().find(|l| l.starts_with("211,2,")).unwrap();
        let fields: Vec<&str> = binary.split(',').collect();
        assert_eq!(fields[5], "105.000000"); // mean_image
        assert_eq!(fields[12], "105.000000"); // predicted_image
        assert_eq!(fields[19], "0.000000"); // pct_error_image

        let extremal = std::fs::read_to_string(&files[1]).unwrap();
        assert!(extremal.starts_with("p,statistic,value,witnesses\n"));
        assert!(extremal.contains("211,longest_cycle,"));
        assert!(extremal.contains("211,max_cycle_equals_one,"));
        // witness lists are semicolon-separated
        let unit = extremal
            .lines()
            .find(|l| l.contains("max_cycle_equals_one"))
            .unwrap();
        assert!(unit.split(',').count() == 4);
    }

    #[test]
    fn unmodeled_classes_have_empty_prediction_cells() {
        let res = run_sweep(&SweepConfig::new(211)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let files = emit_outputs(&[res], dir.path(), OutputFormat::Csv).unwrap();
        let summaries = std::fs::read_to_string(&files[0]).unwrap();
        // m = 3 divides 210: its row exists but carries no model columns
        let row = summaries.lines().find(|l| l.starts_with("211,3,")).unwrap();
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 24);
        assert!(fields[10..].iter().all(|f| f.is_empty()));
    }

    #[test]
    fn json_round_trips_exact_sums() {
        let res = run_sweep(&SweepConfig::new(211)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let files =
            emit_outputs(std::slice::from_ref(&res), dir.path(), OutputFormat::Json).unwrap();
        let body = std::fs::read_to_string(&files[0]).unwrap();
        let docs: serde_json::Value = serde_json::from_str(&body).unwrap();
        let doc = &docs[0];
        assert_eq!(doc["p"], 211);
        assert_eq!(doc["complete"], true);
        // exact sums survive the round trip
        let combined = &doc["classes"][0];
        assert_eq!(combined["m"], 0);
        let sums: crate::graph::StatSums =
            serde_json::from_value(combined["sums"].clone()).unwrap();
        assert_eq!(sums, res.combined.sums);
    }
}
