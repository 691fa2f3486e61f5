//! Voronoi-based exploitation.
//!
//! Cell volumes are estimated by assigning every pool point to its nearest
//! sample. Minor-class samples are ranked by `volume × (number of major-class
//! samples among their 2n nearest neighbours)`; the pool points inside the
//! winning cell are the candidates, and the one nearest to a major-class sample
//! is proposed, subject to a minimum-spacing guard.

use crate::classify::Class;
use crate::dataset::{euclidean, squared_distance};
use crate::design::MonteCarloPool;
use crate::error::{Error, Result};
use crate::kriging::KrigingModel;

#[derive(Debug, Clone, PartialEq)]
pub struct VolumeEstimate {
    /// Fraction of pool points falling in each sample's cell.
    pub volumes: Vec<f64>,
    /// Nearest-sample index for every pool point.
    pub assignment: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellScore {
    pub sample: usize,
    pub neighbors: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellRanking {
    pub x_max: usize,
    pub scores: Vec<CellScore>,
    /// Pool points inside the cell of `x_max`, in pool order.
    pub p_max: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    Candidate(Vec<f64>),
    Substitute(Vec<f64>),
    Fallback,
}

fn nearest(p: &[f64], samples: &[Vec<f64>]) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, s) in samples.iter().enumerate() {
        let d = squared_distance(p, s);
        if d < best.1 {
            best = (i, d);
        }
    }
    best.0
}

pub fn estimate_volumes(samples: &[Vec<f64>], pool: &MonteCarloPool) -> Result<VolumeEstimate> {
    if samples.is_empty() || pool.is_empty() {
        return Err(Error::contract("volume estimation needs samples and a nonempty pool"));
    }
    let assignment: Vec<usize> = pool.iter().map(|p| nearest(p, samples)).collect();
    let mut counts = vec![0usize; samples.len()];
    for &a in &assignment {
        counts[a] += 1;
    }
    let total = assignment.len() as f64;
    Ok(VolumeEstimate {
        volumes: counts.into_iter().map(|c| c as f64 / total).collect(),
        assignment,
    })
}

/// Number of major-class samples among the `min(2n, m-1)` nearest neighbours of a minor sample.
pub fn neighborhood_count(index: usize, samples: &[Vec<f64>], labels: &[Class]) -> Result<usize> {
    let m = samples.len();
    if labels.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: labels.len() });
    }
    if index >= m {
        return Err(Error::contract(format!("sample index {index} out of range {m}")));
    }
    if labels[index] != Class::Minor {
        return Err(Error::contract(format!("sample {index} is not of the minor class")));
    }
    if m < 2 {
        return Err(Error::contract("neighbourhood needs at least two samples"));
    }
    let k = (2 * samples[index].len()).min(m - 1);
    let mut others: Vec<(f64, usize)> = (0..m)
        .filter(|&j| j != index)
        .map(|j| (squared_distance(&samples[index], &samples[j]), j))
        .collect();
    others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(others[..k]
        .iter()
        .filter(|(_, j)| labels[*j] == Class::Major)
        .count())
}

/// Picks the minor-class cell with the highest score (lowest index on ties).
pub fn rank_cells(
    samples: &[Vec<f64>],
    labels: &[Class],
    volumes: &VolumeEstimate,
    pool: &MonteCarloPool,
) -> Result<CellRanking> {
    let mut scores = Vec::new();
    for (i, label) in labels.iter().enumerate() {
        if *label != Class::Minor {
            continue;
        }
        let neighbors = if samples.len() > 1 {
            neighborhood_count(i, samples, labels)?
        } else {
            0
        };
        scores.push(CellScore {
            sample: i,
            neighbors,
            score: volumes.volumes[i] * neighbors as f64,
        });
    }
    let mut best = *scores
        .first()
        .ok_or_else(|| Error::contract("no minor-class sample to rank"))?;
    for s in &scores[1..] {
        if s.score > best.score {
            best = *s;
        }
    }
    let p_max = volumes
        .assignment
        .iter()
        .enumerate()
        .filter(|(_, &a)| a == best.sample)
        .map(|(k, _)| pool.point(k).to_vec())
        .collect();
    Ok(CellRanking {
        x_max: best.sample,
        scores,
        p_max,
    })
}

/// Candidate nearest to any major-class sample; `None` when either set is empty.
pub fn select_candidate(p_max: &[Vec<f64>], major: &[Vec<f64>]) -> Option<Vec<f64>> {
    let mut best: Option<(usize, f64)> = None;
    for (k, p) in p_max.iter().enumerate() {
        for s in major {
            let d = squared_distance(p, s);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((k, d));
            }
        }
    }
    best.map(|(k, _)| p_max[k].clone())
}

/// One tenth of the largest nearest-neighbour distance among the samples.
pub fn space_filling_metric(samples: &[Vec<f64>]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::contract("space-filling metric needs at least two samples"));
    }
    let mut widest = 0.0f64;
    for (i, a) in samples.iter().enumerate() {
        let nn = samples
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, b)| squared_distance(a, b))
            .fold(f64::INFINITY, f64::min);
        widest = widest.max(nn);
    }
    Ok(0.1 * widest.sqrt())
}

/// Smallest distance from `x` to any sample.
pub fn clearance(x: &[f64], samples: &[Vec<f64>]) -> f64 {
    samples
        .iter()
        .map(|s| euclidean(x, s))
        .fold(f64::INFINITY, f64::min)
}

/// Clustering guard: keep the candidate if it clears `spacing`, else try the
/// highest-variance point of the cell, else defer to exploration.
pub fn accept_or_substitute(
    candidate: &[f64],
    p_max: &[Vec<f64>],
    model: &KrigingModel,
    samples: &[Vec<f64>],
    spacing: f64,
) -> Result<Decision> {
    if clearance(candidate, samples) > spacing {
        return Ok(Decision::Candidate(candidate.to_vec()));
    }
    let mut best: Option<(usize, f64)> = None;
    for (k, p) in p_max.iter().enumerate() {
        let v = model.predict(p)?.variance;
        if best.is_none_or(|(_, bv)| v > bv) {
            best = Some((k, v));
        }
    }
    Ok(match best {
        Some((k, _)) if clearance(&p_max[k], samples) > spacing => {
            Decision::Substitute(p_max[k].clone())
        }
        _ => Decision::Fallback,
    })
}

/// Outcome of a full exploitation pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Exploitation {
    pub decision: Decision,
    pub ranking: Option<CellRanking>,
    pub spacing: f64,
}

/// Volumes → ranking → candidate → guard, on the model's own dataset.
pub fn exploit(model: &KrigingModel, pool: &MonteCarloPool) -> Result<Exploitation> {
    let data = model.data();
    let samples = data.points();
    let labels = data.labels();
    let spacing = space_filling_metric(samples)?;
    let major: Vec<Vec<f64>> = samples
        .iter()
        .zip(labels)
        .filter(|(_, l)| **l == Class::Major)
        .map(|(p, _)| p.clone())
        .collect();
    if major.is_empty() || data.count(Class::Minor) == 0 {
        return Ok(Exploitation { decision: Decision::Fallback, ranking: None, spacing });
    }
    let volumes = estimate_volumes(samples, pool)?;
    let ranking = rank_cells(samples, labels, &volumes, pool)?;
    let decision = match select_candidate(&ranking.p_max, &major) {
        Some(cand) => accept_or_substitute(&cand, &ranking.p_max, model, samples, spacing)?,
        None => Decision::Fallback,
    };
    Ok(Exploitation { decision, ranking: Some(ranking), spacing })
}
