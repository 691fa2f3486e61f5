use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{Class, ClassRule};
use crate::design::tplhd;
use crate::error::{Error, Result};
use crate::kriging::KrigingModel;

use super::Problem;

/// Dense labeled TPLHD grid used to score surrogate classifiers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSet {
    pub points: Vec<Vec<f64>>,
    pub normalized: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    pub labels: Vec<Class>,
    pub counts: (usize, usize),
}

impl ReferenceSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Fraction of reference points in the minor class.
    pub fn minor_fraction(&self) -> f64 {
        self.counts.0 as f64 / self.len() as f64
    }

    /// Assembles a reference from evaluated points, labelling them with `rule`.
    pub fn from_parts(
        points: Vec<Vec<f64>>,
        normalized: Vec<Vec<f64>>,
        values: Vec<f64>,
        rule: ClassRule,
    ) -> Result<Self> {
        let labels = values
            .iter()
            .map(|v| rule.classify(*v))
            .collect::<Result<Vec<_>>>()?;
        let c1 = labels.iter().filter(|&&l| l == Class::Minor).count();
        Ok(ReferenceSet {
            counts: (c1, labels.len() - c1),
            points,
            normalized,
            values,
            labels,
        })
    }
}

/// Evaluates a `density × n`-point TPLHD over the problem domain.
pub fn build_reference(problem: &mut Problem, rule: ClassRule, density: usize) -> Result<ReferenceSet> {
    if density == 0 {
        return Err(Error::contract("reference density must be at least 1"));
    }
    let n = problem.dim();
    let normalized = tplhd(density * n, n);
    let domain = problem.domain().clone();
    let points = normalized
        .iter()
        .map(|u| domain.denormalize(u))
        .collect::<Result<Vec<_>>>()?;
    let values = match problem.analytic() {
        Some(b) => {
            let values: Vec<f64> = points.par_iter().map(|x| b.value(x)).collect();
            if let Some((x, v)) = points.iter().zip(&values).find(|(_, v)| !v.is_finite()) {
                return Err(crate::error::EvalError::NonFinite { point: x.clone(), value: *v }.into());
            }
            values
        }
        None => points
            .iter()
            .map(|x| problem.evaluate(x))
            .collect::<Result<Vec<_>>>()?,
    };
    ReferenceSet::from_parts(points, normalized, values, rule)
}

/// Number of maximal runs of minor-class labels along a 1-D reference.
pub fn minor_runs(reference: &ReferenceSet) -> Result<usize> {
    minor_runs_of(reference, &reference.labels)
}

pub(crate) fn minor_runs_of(reference: &ReferenceSet, labels: &[Class]) -> Result<usize> {
    if reference.points.first().is_some_and(|p| p.len() != 1) {
        return Err(Error::contract("run counting needs a one-dimensional reference"));
    }
    let mut order: Vec<usize> = (0..reference.len()).collect();
    order.sort_by(|&a, &b| reference.points[a][0].total_cmp(&reference.points[b][0]));
    let mut runs = 0;
    let mut inside = false;
    for i in order {
        let minor = labels[i] == Class::Minor;
        if minor && !inside {
            runs += 1;
        }
        inside = minor;
    }
    Ok(runs)
}

/// Per-class fraction of reference points the surrogate classifies correctly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub ap_c1: f64,
    pub ap_c2: f64,
    pub m: usize,
    /// Set when the reference holds no point of that class; the rate is then 1.
    pub c1_absent: bool,
    pub c2_absent: bool,
}

pub fn accuracy(model: &KrigingModel, reference: &ReferenceSet, rule: ClassRule) -> Result<ErrorReport> {
    let predicted = predicted_labels(model, reference, rule)?;
    let mut hits = (0usize, 0usize);
    for (truth, guess) in reference.labels.iter().zip(&predicted) {
        match (truth, guess) {
            (Class::Minor, Class::Minor) => hits.0 += 1,
            (Class::Major, Class::Major) => hits.1 += 1,
            _ => {}
        }
    }
    let rate = |hit: usize, total: usize| if total == 0 { 1.0 } else { hit as f64 / total as f64 };
    Ok(ErrorReport {
        ap_c1: rate(hits.0, reference.counts.0),
        ap_c2: rate(hits.1, reference.counts.1),
        m: model.data().len(),
        c1_absent: reference.counts.0 == 0,
        c2_absent: reference.counts.1 == 0,
    })
}

/// Surrogate labels at every reference point.
pub fn predicted_labels(model: &KrigingModel, reference: &ReferenceSet, rule: ClassRule) -> Result<Vec<Class>> {
    reference
        .normalized
        .par_iter()
        .map(|u| model.predict_mean(u).map(|m| rule.class_of(m)))
        .collect()
}
