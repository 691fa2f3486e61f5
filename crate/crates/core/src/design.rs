//! Initial designs and Monte-Carlo candidate pools.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Reproducible random stream keyed by `(seed, stream)`.
///
/// Distinct stream ids under one seed never overlap.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RngStream { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// One draw from `U[0,1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Uniform random candidate cloud on the unit box, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloPool {
    dim: usize,
    coords: Vec<f64>,
    d_min: f64,
}

impl MonteCarloPool {
    /// Builds a pool from explicit normalized points.
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::contract("pool needs at least one point"))?;
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
            }
            if p.iter().any(|c| !(0.0..=1.0).contains(c)) {
                return Err(Error::contract(format!("pool point {p:?} outside the unit box")));
            }
            coords.extend_from_slice(p);
        }
        Ok(MonteCarloPool {
            dim,
            d_min: 1.0 / points.len() as f64,
            coords,
        })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Projected-distance threshold `1 / n_MC`.
    pub fn d_min(&self) -> f64 {
        self.d_min
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }
}

/// Draws `n_mc` independent uniform points on `[0,1]^dim`.
pub fn mc_pool(n_mc: usize, dim: usize, rng: &mut RngStream) -> Result<MonteCarloPool> {
    if n_mc == 0 || dim == 0 {
        return Err(Error::contract("pool size and dimension must be positive"));
    }
    let coords = (0..n_mc * dim).map(|_| rng.uniform()).collect();
    Ok(MonteCarloPool {
        dim,
        coords,
        d_min: 1.0 / n_mc as f64,
    })
}

/// Translational-propagation Latin hypercube design of `k` points in `n` dimensions.
///
/// A one-point seed at the origin level is shifted block-wise along every
/// dimension to fill a `d^n` lattice (`d` the smallest integer with
/// `d^n >= k`). When the lattice overshoots, the points farthest from the
/// domain center are dropped and every coordinate is re-ranked so the `k`
/// survivors again occupy `k` distinct strata. Levels map to the normalized
/// domain as `(rank - 1) / (k - 1)`, so the design reaches the box faces;
/// a single point sits at the center.
pub fn tplhd(k: usize, n: usize) -> Vec<Vec<f64>> {
    assert!(k >= 1 && n >= 1, "tplhd needs k >= 1 and n >= 1");
    let divisions = lattice_divisions(k, n);
    let total = divisions.pow(n as u32);
    let lattice = propagate_seed(total, divisions, n);

    if k == 1 {
        return vec![vec![0.5; n]];
    }
    let levels = if total > k {
        trim_to(lattice, total, k, n)
    } else {
        lattice
    };
    levels
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|lvl| (lvl - 1) as f64 / (k - 1) as f64)
                .collect()
        })
        .collect()
}

fn lattice_divisions(k: usize, n: usize) -> usize {
    let mut d = 1usize;
    while d.checked_pow(n as u32).is_some_and(|v| v < k) {
        d += 1;
    }
    d
}

// Integer levels 1..=total on every axis.
fn propagate_seed(total: usize, divisions: usize, n: usize) -> Vec<Vec<usize>> {
    let mut design = vec![vec![1usize; n]];
    let mut delta = vec![1usize; n];
    for axis in 0..n {
        for (j, dj) in delta.iter_mut().enumerate() {
            *dj = match j.cmp(&axis) {
                std::cmp::Ordering::Less => divisions.pow(axis as u32 - 1),
                std::cmp::Ordering::Equal => total / divisions,
                std::cmp::Ordering::Greater => divisions.pow(axis as u32),
            };
        }
        let mut block = design.clone();
        for _ in 1..divisions {
            for p in block.iter_mut() {
                for (c, dj) in p.iter_mut().zip(&delta) {
                    *c += dj;
                }
            }
            design.extend(block.iter().cloned());
        }
    }
    design
}

fn trim_to(lattice: Vec<Vec<usize>>, total: usize, k: usize, n: usize) -> Vec<Vec<usize>> {
    // The unit-box center sits at level (total + 1) / 2.
    let center = (total as f64 + 1.0) / 2.0;
    let dist = |p: &Vec<usize>| -> f64 {
        p.iter()
            .map(|&c| (c as f64 - center).powi(2))
            .sum::<f64>()
    };
    let mut order: Vec<usize> = (0..lattice.len()).collect();
    order.sort_by(|&a, &b| dist(&lattice[a]).total_cmp(&dist(&lattice[b])));
    let mut kept: Vec<Vec<usize>> = order[..k].iter().map(|&i| lattice[i].clone()).collect();

    for axis in 0..n {
        let mut idx: Vec<usize> = (0..k).collect();
        idx.sort_by_key(|&i| kept[i][axis]);
        for (rank, &i) in idx.iter().enumerate() {
            kept[i][axis] = rank + 1;
        }
    }
    kept
}
