//! Particle swarm with a Nelder–Mead polish of the swarm best.
//!
//! Used to minimize the reduced likelihood over log10 correlation lengths.
//! Non-finite objective values are treated as +inf.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::design::RngStream;
use crate::error::{Error, Result};

const SWARM_STREAM: u64 = 0x5357;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SwarmConfig {
    pub particles: usize,
    pub iterations: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Search box for log10 of every correlation length.
    pub log10_bounds: (f64, f64),
    /// Nelder–Mead iterations after the swarm; 0 disables the polish.
    pub local_steps: usize,
    pub seed: u64,
}

impl Default for SwarmConfig {
    fn default() -> Self {
        SwarmConfig {
            particles: 20,
            iterations: 40,
            inertia: 0.7298,
            cognitive: 1.49618,
            social: 1.49618,
            log10_bounds: (-3.0, 2.0),
            local_steps: 60,
            seed: 0,
        }
    }
}

impl SwarmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.particles < 2 {
            return Err(Error::contract("swarm needs at least 2 particles"));
        }
        if self.iterations == 0 {
            return Err(Error::contract("swarm needs at least one iteration"));
        }
        let (lo, hi) = self.log10_bounds;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::contract(format!(
                "log10 bounds ({lo}, {hi}) not ordered"
            )));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        SwarmConfig { seed, ..self.clone() }
    }
}

#[derive(Debug, Clone)]
pub struct SwarmResult {
    pub best: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Minimizes `objective` over the box `log10_bounds^dim`.
///
/// Ties keep the earliest evaluated candidate.
pub fn minimize<F>(dim: usize, cfg: &SwarmConfig, mut objective: F) -> Result<SwarmResult>
where
    F: FnMut(&[f64]) -> f64,
{
    cfg.validate()?;
    let (lo, hi) = cfg.log10_bounds;
    let span = hi - lo;
    let vmax = 0.5 * span;
    let mut rng = RngStream::new(cfg.seed, SWARM_STREAM);
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut pos: Vec<Vec<f64>> = (0..cfg.particles)
        .map(|_| (0..dim).map(|_| lo + span * rng.uniform()).collect())
        .collect();
    let mut vel: Vec<Vec<f64>> = (0..cfg.particles)
        .map(|_| (0..dim).map(|_| rng.random_range(-vmax..vmax) * 0.2).collect())
        .collect();
    let mut personal = pos.clone();
    let mut personal_val: Vec<f64> = pos.iter().map(|p| eval(p)).collect();

    let mut best_idx = 0;
    for (i, v) in personal_val.iter().enumerate() {
        if *v < personal_val[best_idx] {
            best_idx = i;
        }
    }
    let mut best = personal[best_idx].clone();
    let mut best_val = personal_val[best_idx];

    for _ in 1..cfg.iterations {
        for i in 0..cfg.particles {
            for d in 0..dim {
                let r1 = rng.uniform();
                let r2 = rng.uniform();
                let v = cfg.inertia * vel[i][d]
                    + cfg.cognitive * r1 * (personal[i][d] - pos[i][d])
                    + cfg.social * r2 * (best[d] - pos[i][d]);
                vel[i][d] = v.clamp(-vmax, vmax);
                pos[i][d] = (pos[i][d] + vel[i][d]).clamp(lo, hi);
            }
            let f = eval(&pos[i]);
            if f < personal_val[i] {
                personal_val[i] = f;
                personal[i].clone_from(&pos[i]);
                if f < best_val {
                    best_val = f;
                    best.clone_from(&pos[i]);
                }
            }
        }
    }

    if cfg.local_steps > 0 && best_val.is_finite() {
        let (x, v) = nelder_mead(&best, best_val, lo, hi, cfg.local_steps, &mut eval);
        if v < best_val {
            best = x;
            best_val = v;
        }
    }

    Ok(SwarmResult {
        best,
        value: best_val,
        evaluations,
    })
}

fn nelder_mead<F>(
    start: &[f64],
    start_val: f64,
    lo: f64,
    hi: f64,
    steps: usize,
    eval: &mut F,
) -> (Vec<f64>, f64)
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = start.len();
    let step = 0.05 * (hi - lo);
    let clamp = |x: Vec<f64>| -> Vec<f64> { x.into_iter().map(|v| v.clamp(lo, hi)).collect() };

    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(start.to_vec(), start_val)];
    for d in 0..dim {
        let mut x = start.to_vec();
        x[d] = if x[d] + step <= hi { x[d] + step } else { x[d] - step };
        let f = eval(&x);
        simplex.push((x, f));
    }

    for _ in 0..steps {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let worst = simplex[dim].clone();
        let centroid: Vec<f64> = (0..dim)
            .map(|d| simplex[..dim].iter().map(|v| v.0[d]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            clamp(
                centroid
                    .iter()
                    .zip(&worst.0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect(),
            )
        };

        let reflected = along(1.0);
        let fr = eval(&reflected);
        if fr < simplex[0].1 {
            let expanded = along(2.0);
            let fe = eval(&expanded);
            simplex[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
        } else {
            let contracted = if fr < worst.1 { along(0.5) } else { along(-0.5) };
            let fc = eval(&contracted);
            if fc < worst.1.min(fr) {
                simplex[dim] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for v in simplex.iter_mut().skip(1) {
                    let x = clamp(best.iter().zip(&v.0).map(|(b, x)| b + 0.5 * (x - b)).collect());
                    let f = eval(&x);
                    *v = (x, f);
                }
            }
        }

        let spread = simplex
            .iter()
            .flat_map(|v| v.0.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread < 1e-6 {
            break;
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}
