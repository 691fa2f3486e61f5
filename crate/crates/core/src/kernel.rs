//! Matérn 3/2 product correlation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Per-dimension correlation lengths on the normalized domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    lengths: Vec<f64>,
}

impl Hyperparameters {
    pub fn new(lengths: Vec<f64>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::contract("at least one correlation length required"));
        }
        if lengths.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(Error::contract(format!(
                "correlation lengths must be finite and positive: {lengths:?}"
            )));
        }
        Ok(Hyperparameters { lengths })
    }

    pub fn isotropic(n: usize, length: f64) -> Result<Self> {
        Self::new(vec![length; n])
    }

    pub fn from_log10(log_lengths: &[f64]) -> Result<Self> {
        Self::new(log_lengths.iter().map(|v| 10f64.powf(*v)).collect())
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }
}

/// Matérn 3/2 correlation between two normalized points.
pub fn matern32(a: &[f64], b: &[f64], hyper: &Hyperparameters) -> Result<f64> {
    let n = hyper.dim();
    if a.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: a.len() });
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.len() });
    }
    Ok(matern32_unchecked(a, b, hyper.lengths()))
}

#[inline]
pub(crate) fn matern32_unchecked(a: &[f64], b: &[f64], lengths: &[f64]) -> f64 {
    let mut poly = 1.0;
    let mut expo = 0.0;
    for ((ai, bi), li) in a.iter().zip(b).zip(lengths) {
        let t = SQRT_3 * (ai - bi).abs() / li;
        poly *= 1.0 + t;
        expo += t;
    }
    poly * (-expo).exp()
}
