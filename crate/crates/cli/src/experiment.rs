//! Replicated adaptive runs and their on-disk artifacts.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{ensure, Context, Result};
use mivor_core::problems::{accuracy, build_reference, ErrorReport, ReferenceSet};
use mivor_core::{run_with, StepRecord};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

pub const SAMPLES_FILE: &str = "samples.csv";
pub const ERRORS_FILE: &str = "errors.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const CONFIG_FILE: &str = "config.toml";
pub const REFERENCE_FILE: &str = "reference.csv";

/// Everything one replication produced, up to a failure if there was one.
#[derive(Debug, Clone)]
pub struct Replication {
    pub index: usize,
    pub seed: u64,
    pub steps: Vec<StepRecord>,
    pub errors: Vec<ErrorReport>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Statistic {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// Replications that reached this checkpoint.
    pub count: usize,
}

impl Statistic {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        Some(Statistic {
            mean: values.iter().sum::<f64>() / values.len() as f64,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            count: values.len(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointSummary {
    pub m: usize,
    pub ap_c1: Statistic,
    pub ap_c2: Statistic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub replication: usize,
    pub seed: u64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceInfo {
    pub size: usize,
    pub minor: usize,
    pub major: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainInfo {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Human-readable Drop-Wave reading, when that benchmark is used.
    pub reading: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub problem: String,
    pub dimension: usize,
    pub limit: f64,
    pub initial: usize,
    pub budget: usize,
    pub replications: usize,
    pub seeds: Vec<u64>,
    pub domain: DomainInfo,
    pub reference: ReferenceInfo,
    pub checkpoints: Vec<CheckpointSummary>,
    pub failures: Vec<FailureRecord>,
}

#[derive(Debug)]
pub struct Outcome {
    pub summary: Summary,
    pub replications: Vec<Replication>,
    pub out: PathBuf,
}

impl Outcome {
    pub fn all_succeeded(&self) -> bool {
        self.summary.failures.is_empty()
    }
}

/// Builds the reference set, or loads the cached one named in the config.
pub fn reference_for(cfg: &ExperimentConfig) -> Result<ReferenceSet> {
    match &cfg.experiment.reference {
        Some(path) => load_reference(cfg, path),
        None => {
            let mut problem = cfg.problem()?;
            Ok(build_reference(&mut problem, cfg.rule(), cfg.experiment.reference_density)?)
        }
    }
}

pub fn write_reference(reference: &ReferenceSet, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    let n = reference.points.first().map_or(0, Vec::len);
    let mut header: Vec<String> = (1..=n).map(|i| format!("x_{i}")).collect();
    header.push("y".into());
    w.write_record(&header)?;
    for (x, y) in reference.points.iter().zip(&reference.values) {
        let mut row: Vec<String> = x.iter().map(f64::to_string).collect();
        row.push(y.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_reference(cfg: &ExperimentConfig, path: &Path) -> Result<ReferenceSet> {
    let domain = cfg.domain()?;
    let n = domain.dim();
    let mut r = csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let (mut points, mut normalized, mut values) = (vec![], vec![], vec![]);
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        ensure!(rec.len() == n + 1, "{}: row {} has {} fields, expected {}", path.display(), line + 2, rec.len(), n + 1);
        let nums = rec
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .with_context(|| format!("{}: row {}", path.display(), line + 2))?;
        let x = nums[..n].to_vec();
        normalized.push(domain.normalize(&x)?);
        points.push(x);
        values.push(nums[n]);
    }
    ensure!(!points.is_empty(), "{} holds no reference points", path.display());
    Ok(ReferenceSet::from_parts(points, normalized, values, cfg.rule())?)
}

fn replicate(cfg: &ExperimentConfig, reference: &ReferenceSet, index: usize) -> Replication {
    let seed = cfg.experiment.seed.wrapping_add(index as u64);
    let checkpoints = cfg.checkpoints();
    let rule = cfg.rule();
    let mut rep = Replication { index, seed, steps: vec![], errors: vec![], failure: None };
    let mut problem = match cfg.problem() {
        Ok(p) => p,
        Err(e) => {
            rep.failure = Some(format!("{e:#}"));
            return rep;
        }
    };
    let mut metric_error = None;
    let result = run_with(&mut problem, rule, &cfg.mivor(seed), |state| {
        rep.steps.extend_from_slice(&state.log()[rep.steps.len()..]);
        if checkpoints.contains(&state.dataset().len()) && metric_error.is_none() {
            match accuracy(state.model(), reference, rule) {
                Ok(r) => rep.errors.push(r),
                Err(e) => metric_error = Some(e.to_string()),
            }
        }
    });
    rep.failure = match (result, metric_error) {
        (Err(e), _) => Some(e.to_string()),
        (Ok(_), Some(e)) => Some(e),
        (Ok(_), None) => None,
    };
    rep
}

/// Runs every replication and aggregates per-checkpoint statistics.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(Summary, Vec<Replication>)> {
    cfg.validate()?;
    let reference = reference_for(cfg)?;
    let count = cfg.experiment.replications;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cfg.experiment.workers {
        pool = pool.num_threads(w);
    }
    let pool = pool.build().context("starting worker pool")?;
    let replications: Vec<Replication> =
        pool.install(|| (0..count).into_par_iter().map(|i| replicate(cfg, &reference, i)).collect());
    let summary = summarize(cfg, &reference, &replications)?;
    Ok((summary, replications))
}

pub fn summarize(cfg: &ExperimentConfig, reference: &ReferenceSet, reps: &[Replication]) -> Result<Summary> {
    let domain = cfg.domain()?;
    let checkpoints = cfg
        .checkpoints()
        .into_iter()
        .filter_map(|m| {
            let hits: Vec<&ErrorReport> = reps.iter().flat_map(|r| r.errors.iter().filter(move |e| e.m == m)).collect();
            let c1: Vec<f64> = hits.iter().map(|e| e.ap_c1).collect();
            let c2: Vec<f64> = hits.iter().map(|e| e.ap_c2).collect();
            Some(CheckpointSummary { m, ap_c1: Statistic::of(&c1)?, ap_c2: Statistic::of(&c2)? })
        })
        .collect();
    Ok(Summary {
        problem: cfg.problem.name.clone(),
        dimension: domain.dim(),
        limit: cfg.problem.limit,
        initial: cfg.sampling.initial,
        budget: cfg.sampling.budget,
        replications: reps.len(),
        seeds: reps.iter().map(|r| r.seed).collect(),
        domain: DomainInfo {
            lower: domain.lower().to_vec(),
            upper: domain.upper().to_vec(),
            reading: cfg.dropwave_reading().map(|r| r.describe()),
        },
        reference: ReferenceInfo {
            size: reference.len(),
            minor: reference.counts.0,
            major: reference.counts.1,
        },
        checkpoints,
        failures: reps
            .iter()
            .filter_map(|r| {
                r.failure.as_ref().map(|e| FailureRecord { replication: r.index, seed: r.seed, error: e.clone() })
            })
            .collect(),
    })
}

/// Writes samples, errors, summary and the resolved configuration.
pub fn write_artifacts(cfg: &ExperimentConfig, summary: &Summary, reps: &[Replication]) -> Result<PathBuf> {
    let out = cfg.experiment.out.clone();
    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;

    let n = summary.dimension;
    let mut w = csv::Writer::from_path(out.join(SAMPLES_FILE))?;
    let mut header: Vec<String> = vec!["replication".into(), "iteration".into(), "step_kind".into()];
    header.extend((1..=n).map(|i| format!("x_{i}")));
    header.extend(["y".into(), "r_after".into()]);
    w.write_record(&header)?;
    for rep in reps {
        for s in &rep.steps {
            let mut row = vec![rep.index.to_string(), s.iteration.to_string(), s.kind.as_str().to_string()];
            row.extend(s.physical.iter().map(f64::to_string));
            row.extend([s.value.to_string(), s.r_after.to_string()]);
            w.write_record(&row)?;
        }
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(out.join(ERRORS_FILE))?;
    w.write_record(["replication", "checkpoint_m", "ap_c1", "ap_c2"])?;
    for rep in reps {
        for e in &rep.errors {
            w.write_record([rep.index.to_string(), e.m.to_string(), e.ap_c1.to_string(), e.ap_c2.to_string()])?;
        }
    }
    w.flush()?;

    fs::write(out.join(SUMMARY_FILE), serde_json::to_string_pretty(summary)? + "\n")?;
    fs::write(out.join(CONFIG_FILE), cfg.to_toml()?)?;
    Ok(out)
}

pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome> {
    let (summary, replications) = run_experiment(cfg)?;
    let out = write_artifacts(cfg, &summary, &replications)?;
    Ok(Outcome { summary, replications, out })
}
