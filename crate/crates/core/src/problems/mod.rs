//! Benchmark problems, black-box adapters, reference sets and accuracy metrics.

mod dropwave;
mod external;
mod functions;
mod reference;

pub use dropwave::{calibrate_dropwave, CalibrationReport, DropWaveCandidate, DropWaveReading};
pub use external::{format_request, parse_response, ExternalCommand, ExternalEvaluator};
pub use functions::{higdon, michalewicz1d, modified_dropwave, modified_higdon, DropWaveDenominator};
pub use reference::{accuracy, build_reference, minor_runs, predicted_labels, ErrorReport, ReferenceSet};

use crate::dataset::ParameterDomain;
use crate::error::{Error, EvalError, Result};

/// Anything that maps a physical point to a scalar response.
pub trait Evaluator: Send {
    fn evaluate(&mut self, x: &[f64]) -> Result<f64, EvalError>;
}

impl<F> Evaluator for F
where
    F: FnMut(&[f64]) -> f64 + Send,
{
    fn evaluate(&mut self, x: &[f64]) -> Result<f64, EvalError> {
        Ok(self(x))
    }
}

/// Built-in analytic responses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Benchmark {
    Higdon,
    ModifiedHigdon,
    Michalewicz,
    DropWave(DropWaveReading),
}

impl Benchmark {
    pub fn name(&self) -> &'static str {
        match self {
            Benchmark::Higdon => "higdon",
            Benchmark::ModifiedHigdon => "modified-higdon",
            Benchmark::Michalewicz => "michalewicz",
            Benchmark::DropWave(_) => "dropwave",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "higdon" => Benchmark::Higdon,
            "modified-higdon" => Benchmark::ModifiedHigdon,
            "michalewicz" => Benchmark::Michalewicz,
            "dropwave" => Benchmark::DropWave(DropWaveReading::CALIBRATED),
            _ => return None,
        })
    }

    pub fn domain(&self) -> ParameterDomain {
        let (lo, hi) = match self {
            Benchmark::Higdon | Benchmark::ModifiedHigdon => (vec![-10.0], vec![10.0]),
            Benchmark::Michalewicz => (vec![-10.0], vec![0.0]),
            Benchmark::DropWave(r) => (r.lower.to_vec(), r.upper.to_vec()),
        };
        ParameterDomain::new(lo, hi).expect("built-in domains are valid")
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            Benchmark::Higdon => higdon(x[0]),
            Benchmark::ModifiedHigdon => modified_higdon(x[0]),
            Benchmark::Michalewicz => michalewicz1d(x[0]),
            Benchmark::DropWave(r) => modified_dropwave([x[0], x[1]], r.denominator),
        }
    }
}

impl Evaluator for Benchmark {
    fn evaluate(&mut self, x: &[f64]) -> Result<f64, EvalError> {
        Ok(self.value(x))
    }
}

/// A named black box over a physical parameter domain.
pub struct Problem {
    name: String,
    domain: ParameterDomain,
    analytic: Option<Benchmark>,
    evaluator: Box<dyn Evaluator>,
}

impl std::fmt::Debug for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        domain: ParameterDomain,
        evaluator: impl Evaluator + 'static,
    ) -> Self {
        Problem {
            name: name.into(),
            domain,
            analytic: None,
            evaluator: Box::new(evaluator),
        }
    }

    pub fn benchmark(b: Benchmark) -> Self {
        Problem {
            name: b.name().to_string(),
            domain: b.domain(),
            analytic: Some(b),
            evaluator: Box::new(b),
        }
    }

    /// A built-in response on a caller-chosen domain.
    pub fn benchmark_on(b: Benchmark, domain: ParameterDomain) -> Self {
        Problem {
            domain,
            ..Problem::benchmark(b)
        }
    }

    pub fn builtin(name: &str) -> Result<Self> {
        Benchmark::from_name(name)
            .map(Self::benchmark)
            .ok_or_else(|| Error::contract(format!("unknown built-in problem {name:?}")))
    }

    /// Black box served by a child process speaking the line protocol.
    pub fn external(
        name: impl Into<String>,
        domain: ParameterDomain,
        cmd: &ExternalCommand,
    ) -> Result<Self> {
        let ev = ExternalEvaluator::spawn(cmd)?;
        Ok(Problem::new(name, domain, ev))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &ParameterDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// The analytic function behind this problem, when there is one.
    pub fn analytic(&self) -> Option<Benchmark> {
        self.analytic
    }

    /// Evaluates at a physical point; non-finite responses are errors.
    pub fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let v = self.evaluator.evaluate(x)?;
        if !v.is_finite() {
            return Err(EvalError::NonFinite {
                point: x.to_vec(),
                value: v,
            }
            .into());
        }
        Ok(v)
    }

    /// Evaluates at a normalized point.
    pub fn evaluate_normalized(&mut self, u: &[f64]) -> Result<f64> {
        let x = self.domain.denormalize(u)?;
        self.evaluate(&x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names_roundtrip() {
        for name in ["higdon", "modified-higdon", "michalewicz", "dropwave"] {
            assert_eq!(Problem::builtin(name).unwrap().name(), name);
        }
        assert!(Problem::builtin("branin").is_err());
    }

    #[test]
    fn normalized_center_of_higdon_domain() {
        let p = Problem::builtin("higdon").unwrap();
        assert_eq!(p.domain().normalize(&[0.0]).unwrap(), vec![0.5]);
    }

    #[test]
    fn non_finite_response_rejected() {
        let mut p = Problem::new("bad", ParameterDomain::unit(1), |_: &[f64]| f64::NAN);
        assert!(matches!(p.evaluate(&[0.5]), Err(Error::Eval(EvalError::NonFinite { .. }))));
    }
}
