//! Space-filling exploration over a Monte-Carlo candidate pool.

use crate::dataset::squared_distance;
use crate::design::MonteCarloPool;
use crate::error::{Error, Result};

/// Smallest per-coordinate gap and smallest Euclidean distance from `candidate` to `samples`.
fn distances(candidate: &[f64], samples: &[Vec<f64>]) -> (f64, f64) {
    let mut proj = f64::INFINITY;
    let mut inter2 = f64::INFINITY;
    for s in samples {
        let gap = candidate
            .iter()
            .zip(s)
            .map(|(a, b)| (a - b).abs())
            .fold(f64::INFINITY, f64::min);
        proj = proj.min(gap);
        inter2 = inter2.min(squared_distance(candidate, s));
    }
    (proj, inter2.sqrt())
}

/// Intersite distance of `candidate`, or 0 when some sample lies within
/// `d_min` of it along any single coordinate.
pub fn mipt_score(candidate: &[f64], samples: &[Vec<f64>], d_min: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::contract("MIPT score needs at least one sample"));
    }
    if let Some(s) = samples.iter().find(|s| s.len() != candidate.len()) {
        return Err(Error::DimensionMismatch {
            expected: candidate.len(),
            got: s.len(),
        });
    }
    let (proj, inter) = distances(candidate, samples);
    Ok(if proj < d_min { 0.0 } else { inter })
}

/// Pool point with the best MIPT score (lowest index on ties).
///
/// When the threshold eliminates every candidate, the one with the largest
/// projected distance is returned instead.
pub fn select_mipt(pool: &MonteCarloPool, samples: &[Vec<f64>]) -> Result<Vec<f64>> {
    if pool.is_empty() {
        return Err(Error::contract("MIPT selection needs a nonempty pool"));
    }
    if samples.is_empty() {
        return Err(Error::contract("MIPT selection needs at least one sample"));
    }
    let d_min = pool.d_min();
    let mut best = (0usize, f64::NEG_INFINITY);
    let mut fallback = (0usize, f64::NEG_INFINITY);
    for (i, p) in pool.iter().enumerate() {
        let (proj, inter) = distances(p, samples);
        let score = if proj < d_min { 0.0 } else { inter };
        if score > best.1 {
            best = (i, score);
        }
        if proj > fallback.1 {
            fallback = (i, proj);
        }
    }
    let pick = if best.1 > 0.0 { best.0 } else { fallback.0 };
    Ok(pool.point(pick).to_vec())
}
