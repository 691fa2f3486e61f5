use serde::{Deserialize, Serialize};

use crate::classify::{Class, ClassRule};
use crate::error::{Error, Result};

/// Physical box bounds of the parameter space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl ParameterDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::contract("domain needs at least one dimension"));
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(Error::contract(format!(
                    "dimension {i}: bounds [{lo}, {hi}] are not an ordered finite interval"
                )));
            }
        }
        Ok(ParameterDomain { lower, upper })
    }

    pub fn unit(n: usize) -> Self {
        ParameterDomain {
            lower: vec![0.0; n],
            upper: vec![1.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Maps a physical point onto `[0,1]^n`.
    pub fn normalize(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .enumerate()
            .map(|(i, (&xi, (&lo, &hi)))| {
                if !(lo..=hi).contains(&xi) {
                    return Err(Error::contract(format!(
                        "coordinate {i} = {xi} outside [{lo}, {hi}]"
                    )));
                }
                Ok((xi - lo) / (hi - lo))
            })
            .collect()
    }

    /// Maps a normalized point back to physical coordinates.
    pub fn denormalize(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(u)?;
        u.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .enumerate()
            .map(|(i, (&ui, (&lo, &hi)))| {
                if !(0.0..=1.0).contains(&ui) {
                    return Err(Error::contract(format!(
                        "normalized coordinate {i} = {ui} outside [0, 1]"
                    )));
                }
                Ok((lo + ui * (hi - lo)).clamp(lo, hi))
            })
            .collect()
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }
}

/// Normalized sample inputs, their observations and cached class labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    dim: usize,
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
    labels: Vec<Class>,
    rule: ClassRule,
}

impl Dataset {
    pub fn empty(dim: usize, rule: ClassRule) -> Self {
        Dataset {
            dim,
            points: Vec::new(),
            values: Vec::new(),
            labels: Vec::new(),
            rule,
        }
    }

    pub fn new(points: Vec<Vec<f64>>, values: Vec<f64>, rule: ClassRule) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::DegenerateDataset("no points".into()))?;
        if points.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                got: values.len(),
            });
        }
        let mut data = Dataset::empty(dim, rule);
        for (p, v) in points.into_iter().zip(values) {
            data.push(p, v)?;
        }
        Ok(data)
    }

    /// Appends one observation, rejecting duplicates and out-of-box points.
    pub fn push(&mut self, point: Vec<f64>, value: f64) -> Result<Class> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: point.len(),
            });
        }
        if point.iter().any(|c| !(0.0..=1.0).contains(c)) {
            return Err(Error::contract(format!(
                "sample {point:?} outside the unit box"
            )));
        }
        if self.points.iter().any(|p| p == &point) {
            return Err(Error::contract(format!("duplicate sample {point:?}")));
        }
        let label = self.rule.classify(value)?;
        self.points.push(point);
        self.values.push(value);
        self.labels.push(label);
        Ok(label)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> &[Class] {
        &self.labels
    }

    pub fn rule(&self) -> ClassRule {
        self.rule
    }

    pub fn count(&self, class: Class) -> usize {
        self.labels.iter().filter(|&&l| l == class).count()
    }

    pub fn min_pairwise_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                best = best.min(euclidean(a, b));
            }
        }
        best
    }
}

#[inline]
pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    squared_distance(a, b).sqrt()
}
