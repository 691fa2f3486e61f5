//! Ordinary kriging with a Matérn 3/2 correlation.
//!
//! The correlation matrix is factorized once per model as `R + nugget·I = L Lᵀ`
//! and every estimator (`μ̂`, `σ̂²`, the reduced likelihood, predictive mean and
//! variance) is obtained through triangular solves against `L`. The nugget acts
//! as a nugget effect: a query that coincides exactly with a training input sees
//! the same inflated self-correlation as the matrix diagonal, so training points
//! are reproduced exactly.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::classify::Class;
use crate::dataset::Dataset;
use crate::error::{Error, FitDiagnostics, Result};
use crate::kernel::{matern32_unchecked, Hyperparameters};
use crate::swarm::{self, SwarmConfig};

/// Nugget escalation ladder tried when a factorization fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NuggetPolicy {
    pub start: f64,
    pub factor: f64,
    pub max: f64,
}

impl Default for NuggetPolicy {
    fn default() -> Self {
        NuggetPolicy {
            start: 1e-8,
            factor: 10.0,
            max: 1e-4,
        }
    }
}

impl NuggetPolicy {
    /// A single fixed nugget, no escalation.
    pub fn fixed(nugget: f64) -> Self {
        NuggetPolicy {
            start: nugget,
            factor: 10.0,
            max: nugget,
        }
    }

    fn ladder(&self) -> impl Iterator<Item = f64> + '_ {
        let limit = self.max * (1.0 + 1e-9);
        std::iter::successors(Some(self.start), move |&v| {
            let next = v * self.factor;
            (self.factor > 1.0 && v > 0.0 && next <= limit).then_some(next)
        })
    }
}

/// Reduced likelihood and the estimators computed alongside it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Likelihood {
    /// `σ̂² · det(R)^(1/m)`.
    pub psi: f64,
    pub mu_hat: f64,
    pub sigma2_hat: f64,
    pub nugget: f64,
}

/// Mean and variance of the kriging predictor at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub mean: f64,
    pub variance: f64,
}

struct Factorized {
    chol: Cholesky<f64, Dyn>,
    rinv_one: DVector<f64>,
    one_rinv_one: f64,
    alpha: DVector<f64>,
    likelihood: Likelihood,
}

fn correlation_matrix(data: &Dataset, lengths: &[f64], nugget: f64) -> DMatrix<f64> {
    let pts = data.points();
    let m = pts.len();
    let mut r = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        r[(i, i)] = 1.0 + nugget;
        for j in 0..i {
            let v = matern32_unchecked(&pts[i], &pts[j], lengths);
            r[(i, j)] = v;
            r[(j, i)] = v;
        }
    }
    r
}

fn factorize(data: &Dataset, hyper: &Hyperparameters, nugget: f64) -> Result<Factorized> {
    let m = data.len();
    if m < 2 {
        return Err(Error::DegenerateDataset(format!(
            "{m} sample(s); at least 2 are needed for a process variance"
        )));
    }
    if hyper.dim() != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            got: hyper.dim(),
        });
    }
    let r = correlation_matrix(data, hyper.lengths(), nugget);
    let chol = r.cholesky().ok_or(Error::IllConditioned { nugget })?;

    // Every pivot of R + δI is at least δ in exact arithmetic.
    let l = chol.l_dirty();
    let mut log_det = 0.0;
    for i in 0..m {
        let d = l[(i, i)];
        if !(d * d >= 0.5 * nugget) || !d.is_finite() {
            return Err(Error::IllConditioned { nugget });
        }
        log_det += 2.0 * d.ln();
    }

    let ones = DVector::from_element(m, 1.0);
    let y = DVector::from_column_slice(data.values());
    let rinv_one = chol.solve(&ones);
    let one_rinv_one = rinv_one.sum();
    let mu_hat = rinv_one.dot(&y) / one_rinv_one;
    let resid = y.add_scalar(-mu_hat);
    let alpha = chol.solve(&resid);
    let sigma2_hat = (resid.dot(&alpha) / m as f64).max(0.0);
    let psi = sigma2_hat * (log_det / m as f64).exp();
    if !(psi.is_finite() && mu_hat.is_finite() && one_rinv_one > 0.0) {
        return Err(Error::IllConditioned { nugget });
    }

    Ok(Factorized {
        chol,
        rinv_one,
        one_rinv_one,
        alpha,
        likelihood: Likelihood {
            psi,
            mu_hat,
            sigma2_hat,
            nugget,
        },
    })
}

fn factorize_with_policy(
    data: &Dataset,
    hyper: &Hyperparameters,
    policy: &NuggetPolicy,
) -> Result<Factorized> {
    let mut last = Error::IllConditioned { nugget: policy.start };
    for nugget in policy.ladder() {
        match factorize(data, hyper, nugget) {
            Ok(f) => return Ok(f),
            Err(e @ Error::IllConditioned { .. }) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Reduced likelihood `ψ = σ̂² det(R)^(1/m)` at a fixed nugget.
pub fn reduced_likelihood(
    data: &Dataset,
    hyper: &Hyperparameters,
    nugget: f64,
) -> Result<Likelihood> {
    factorize(data, hyper, nugget).map(|f| f.likelihood)
}

/// A fitted ordinary-kriging model; immutable once built.
pub struct KrigingModel {
    data: Dataset,
    hyper: Hyperparameters,
    likelihood: Likelihood,
    chol: Cholesky<f64, Dyn>,
    rinv_one: DVector<f64>,
    one_rinv_one: f64,
    alpha: DVector<f64>,
}

impl std::fmt::Debug for KrigingModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KrigingModel")
            .field("samples", &self.data.len())
            .field("lengths", &self.hyper.lengths())
            .field("mu_hat", &self.likelihood.mu_hat)
            .field("sigma2_hat", &self.likelihood.sigma2_hat)
            .field("nugget", &self.likelihood.nugget)
            .finish()
    }
}

impl KrigingModel {
    /// Builds the model at given hyperparameters, escalating the nugget as needed.
    pub fn with_hyperparameters(
        data: Dataset,
        hyper: Hyperparameters,
        policy: &NuggetPolicy,
    ) -> Result<Self> {
        let f = factorize_with_policy(&data, &hyper, policy)?;
        Ok(KrigingModel {
            data,
            hyper,
            likelihood: f.likelihood,
            chol: f.chol,
            rinv_one: f.rinv_one,
            one_rinv_one: f.one_rinv_one,
            alpha: f.alpha,
        })
    }

    /// Fits correlation lengths by minimizing the reduced likelihood.
    ///
    /// The swarm searches log10 lengths inside `cfg.log10_bounds`; each
    /// candidate is factorized with the smallest workable nugget from
    /// `policy`, and candidates that stay singular score +inf.
    pub fn fit(data: Dataset, cfg: &SwarmConfig, policy: &NuggetPolicy) -> Result<Self> {
        if data.len() < 2 {
            return Err(Error::DegenerateDataset(format!(
                "{} sample(s); at least 2 are needed to fit",
                data.len()
            )));
        }
        let min_dist = data.min_pairwise_distance();
        if !(min_dist > 0.0) {
            return Err(Error::contract("training points must be pairwise distinct"));
        }
        let result = swarm::minimize(data.dim(), cfg, |log_l| {
            let Ok(hyper) = Hyperparameters::from_log10(log_l) else {
                return f64::INFINITY;
            };
            factorize_with_policy(&data, &hyper, policy)
                .map(|f| f.likelihood.psi)
                .unwrap_or(f64::INFINITY)
        })?;
        if !result.value.is_finite() {
            return Err(Error::FitFailed(FitDiagnostics {
                samples: data.len(),
                evaluated: result.evaluations,
                max_nugget: policy.max,
                min_pairwise_distance: min_dist,
            }));
        }
        let hyper = Hyperparameters::from_log10(&result.best)?;
        Self::with_hyperparameters(data, hyper, policy)
    }

    pub fn data(&self) -> &Dataset {
        &self.data
    }

    pub fn hyperparameters(&self) -> &Hyperparameters {
        &self.hyper
    }

    pub fn likelihood(&self) -> Likelihood {
        self.likelihood
    }

    pub fn mu_hat(&self) -> f64 {
        self.likelihood.mu_hat
    }

    pub fn sigma2_hat(&self) -> f64 {
        self.likelihood.sigma2_hat
    }

    pub fn nugget(&self) -> f64 {
        self.likelihood.nugget
    }

    /// Lower-triangular factor of `R + nugget·I`.
    pub fn factor(&self) -> DMatrix<f64> {
        self.chol.l()
    }

    fn cross_correlation(&self, x: &[f64]) -> DVector<f64> {
        let lengths = self.hyper.lengths();
        let nugget = self.likelihood.nugget;
        DVector::from_iterator(
            self.data.len(),
            self.data.points().iter().map(|p| {
                if p.as_slice() == x {
                    1.0 + nugget
                } else {
                    matern32_unchecked(x, p, lengths)
                }
            }),
        )
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.data.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.data.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Predictive mean only; cheaper than [`KrigingModel::predict`].
    pub fn predict_mean(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        let r = self.cross_correlation(x);
        Ok(self.likelihood.mu_hat + r.dot(&self.alpha))
    }

    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        self.check_point(x)?;
        let r = self.cross_correlation(x);
        let mean = self.likelihood.mu_hat + r.dot(&self.alpha);
        let v = self
            .chol
            .l_dirty()
            .solve_lower_triangular(&r)
            .expect("factor has a nonzero diagonal");
        let u0 = self.rinv_one.dot(&r) - 1.0;
        let variance =
            self.likelihood.sigma2_hat * (1.0 - v.norm_squared() + u0 * u0 / self.one_rinv_one);
        Ok(Prediction {
            mean,
            variance: variance.max(0.0),
        })
    }

    /// Surrogate class: the rule applied to the predictive mean.
    pub fn classify(&self, x: &[f64]) -> Result<Class> {
        Ok(self.data.rule().class_of(self.predict_mean(x)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::ClassRule;

    fn dataset(points: Vec<Vec<f64>>, values: Vec<f64>) -> Dataset {
        Dataset::new(points, values, ClassRule::new(0.0)).unwrap()
    }

    #[test]
    fn equal_observations_give_zero_psi() {
        let data = dataset(vec![vec![0.2], vec![0.7]], vec![1.5, 1.5]);
        let h = Hyperparameters::isotropic(1, 0.3).unwrap();
        let lk = reduced_likelihood(&data, &h, 1e-8).unwrap();
        assert!(lk.sigma2_hat < 1e-25);
        assert!(lk.psi < 1e-25);
        assert!((lk.mu_hat - 1.5).abs() < 1e-12);
    }

    #[test]
    fn single_sample_is_degenerate() {
        let data = dataset(vec![vec![0.2]], vec![1.0]);
        let h = Hyperparameters::isotropic(1, 0.3).unwrap();
        assert!(matches!(
            reduced_likelihood(&data, &h, 1e-8),
            Err(Error::DegenerateDataset(_))
        ));
        assert!(KrigingModel::fit(data, &SwarmConfig::default(), &NuggetPolicy::default()).is_err());
    }

    #[test]
    fn constant_data_predicts_constant() {
        let pts: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64 / 5.0]).collect();
        let data = dataset(pts, vec![-0.75; 6]);
        let model =
            KrigingModel::fit(data, &SwarmConfig::default(), &NuggetPolicy::default()).unwrap();
        assert_eq!(model.sigma2_hat(), 0.0);
        for x in [0.0, 0.13, 0.5, 0.91] {
            let p = model.predict(&[x]).unwrap();
            assert!((p.mean + 0.75).abs() < 1e-9, "mean {} at {x}", p.mean);
            assert_eq!(p.variance, 0.0);
        }
    }

    #[test]
    fn fit_is_deterministic() {
        let pts: Vec<Vec<f64>> = (0..7).map(|i| vec![(i as f64 + 0.5) / 7.0]).collect();
        let ys: Vec<f64> = pts.iter().map(|p| (6.0 * p[0]).sin()).collect();
        let cfg = SwarmConfig::default().with_seed(42);
        let a = KrigingModel::fit(dataset(pts.clone(), ys.clone()), &cfg, &NuggetPolicy::default())
            .unwrap();
        let b = KrigingModel::fit(dataset(pts, ys), &cfg, &NuggetPolicy::default()).unwrap();
        assert_eq!(a.hyperparameters(), b.hyperparameters());
        assert_eq!(a.mu_hat().to_bits(), b.mu_hat().to_bits());
    }

    #[test]
    fn sine_fit_interpolates() {
        let pts: Vec<Vec<f64>> = (0..8).map(|i| vec![(i as f64 + 0.5) / 8.0]).collect();
        let ys: Vec<f64> = pts.iter().map(|p| (2.0 * std::f64::consts::PI * p[0]).sin()).collect();
        let model = KrigingModel::fit(
            dataset(pts.clone(), ys.clone()),
            &SwarmConfig::default(),
            &NuggetPolicy::default(),
        )
        .unwrap();
        for (p, y) in pts.iter().zip(&ys) {
            let pr = model.predict(p).unwrap();
            assert!((pr.mean - y).abs() <= 1e-6 * (1.0 + y.abs()));
            assert!(pr.variance <= 1e-6 * model.sigma2_hat());
        }
        // leave-one-out residuals from refits at the fitted lengths
        for skip in 0..pts.len() {
            let (p, y): (Vec<_>, Vec<_>) = pts
                .iter()
                .cloned()
                .zip(ys.iter().cloned())
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, v)| v)
                .unzip();
            let loo = KrigingModel::with_hyperparameters(
                dataset(p, y),
                model.hyperparameters().clone(),
                &NuggetPolicy::default(),
            )
            .unwrap();
            let err = loo.predict_mean(&pts[skip]).unwrap() - ys[skip];
            assert!(err.is_finite() && err.abs() < 0.5, "loo error {err}");
        }
    }

    #[test]
    fn far_query_reverts_to_process_mean() {
        let data = dataset(vec![vec![0.0], vec![0.01], vec![0.03]], vec![1.0, -2.0, 0.5]);
        let h = Hyperparameters::isotropic(1, 1e-3).unwrap();
        let model = KrigingModel::with_hyperparameters(data, h, &NuggetPolicy::default()).unwrap();
        let p = model.predict(&[1.0]).unwrap();
        let lim = model.sigma2_hat() * (1.0 + 1.0 / model.one_rinv_one);
        assert!((p.mean - model.mu_hat()).abs() < 1e-12);
        assert!((p.variance - lim).abs() < 1e-12 * lim);
    }

    #[test]
    fn factor_reproduces_correlation_matrix() {
        let data = dataset(vec![vec![0.1, 0.2], vec![0.5, 0.9], vec![0.8, 0.4]], vec![0.0, 1.0, 2.0]);
        let h = Hyperparameters::new(vec![0.3, 0.6]).unwrap();
        let model = KrigingModel::with_hyperparameters(data.clone(), h.clone(), &NuggetPolicy::default()).unwrap();
        let l = model.factor();
        let rebuilt = &l * l.transpose();
        let r = correlation_matrix(&data, h.lengths(), model.nugget());
        assert!((rebuilt - r).abs().max() < 1e-14);
    }

    #[test]
    fn nugget_ladder_escalates() {
        let ladder: Vec<f64> = NuggetPolicy::default().ladder().collect();
        assert_eq!(ladder.len(), 5);
        assert!((ladder[4] - 1e-4).abs() < 1e-18);
        assert_eq!(NuggetPolicy::fixed(1e-6).ladder().count(), 1);
    }

    #[test]
    fn dimension_mismatch_on_predict() {
        let data = dataset(vec![vec![0.1], vec![0.6]], vec![0.0, 1.0]);
        let model = KrigingModel::with_hyperparameters(
            data,
            Hyperparameters::isotropic(1, 0.2).unwrap(),
            &NuggetPolicy::default(),
        )
        .unwrap();
        assert!(model.predict(&[0.1, 0.2]).is_err());
    }
}
