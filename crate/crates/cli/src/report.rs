//! Tables and plot-ready curves from one or more `summary.json` files.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use crate::experiment::{CheckpointSummary, Statistic, Summary, SUMMARY_FILE};

const STATISTICS: [&str; 3] = ["mean", "min", "max"];

#[derive(Debug, Clone)]
pub struct Labelled {
    pub label: String,
    pub summary: Summary,
}

/// Label for a summary file: its directory name when the file has the
/// default name, otherwise the file stem.
pub fn label_for(path: &Path) -> String {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("summary");
    if path.file_name().and_then(|s| s.to_str()) == Some(SUMMARY_FILE) {
        if let Some(dir) = path.parent().and_then(|p| p.file_name()).and_then(|s| s.to_str()) {
            return dir.to_string();
        }
    }
    stem.to_string()
}

/// Accepts either a summary file or a directory holding one.
pub fn load(path: &Path) -> Result<Labelled> {
    let file: PathBuf = if path.is_dir() { path.join(SUMMARY_FILE) } else { path.to_path_buf() };
    let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
    let summary: Summary =
        serde_json::from_str(&text).with_context(|| format!("{} is not a valid summary", file.display()))?;
    Ok(Labelled { label: label_for(&file), summary })
}

fn pick(s: &Statistic, stat: &str) -> f64 {
    match stat {
        "mean" => s.mean,
        "min" => s.min,
        _ => s.max,
    }
}

fn checkpoint(summary: &Summary, m: usize) -> Option<&CheckpointSummary> {
    summary.checkpoints.iter().find(|c| c.m == m)
}

fn all_checkpoints(items: &[Labelled]) -> BTreeSet<usize> {
    items.iter().flat_map(|l| l.summary.checkpoints.iter().map(|c| c.m)).collect()
}

/// One row per (checkpoint, statistic); one column pair per summary.
pub fn table(items: &[Labelled]) -> String {
    let mut header = vec!["m".to_string(), "stat".to_string()];
    for l in items {
        header.push(format!("{}:ap_c1", l.label));
        header.push(format!("{}:ap_c2", l.label));
    }
    let mut rows = vec![header];
    for m in all_checkpoints(items) {
        for stat in STATISTICS {
            let mut row = vec![m.to_string(), stat.to_string()];
            for l in items {
                match checkpoint(&l.summary, m) {
                    Some(c) => {
                        row.push(format!("{:.4}", pick(&c.ap_c1, stat)));
                        row.push(format!("{:.4}", pick(&c.ap_c2, stat)));
                    }
                    None => row.extend(["-".to_string(), "-".to_string()]),
                }
            }
            rows.push(row);
        }
    }
    let widths: Vec<usize> =
        (0..rows[0].len()).map(|j| rows.iter().map(|r| r[j].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in &rows {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    for l in items {
        for f in &l.summary.failures {
            let _ = writeln!(out, "{}: replication {} (seed {}) failed: {}", l.label, f.replication, f.seed, f.error);
        }
    }
    out
}

/// Long-format curves: label, checkpoint_m, statistic, ap_c1, ap_c2.
pub fn write_curves(items: &[Labelled], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(["label", "checkpoint_m", "statistic", "ap_c1", "ap_c2"])?;
    for l in items {
        for c in &l.summary.checkpoints {
            for stat in STATISTICS {
                w.write_record([
                    l.label.clone(),
                    c.m.to_string(),
                    stat.to_string(),
                    pick(&c.ap_c1, stat).to_string(),
                    pick(&c.ap_c2, stat).to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
