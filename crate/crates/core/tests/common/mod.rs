//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::io::Write;

use mivor_core::Class;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Prints a line that survives libtest output capture.
pub fn report(line: &str) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{line}");
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn matern(a: &[f64], b: &[f64], lengths: &[f64]) -> f64 {
    let s3 = 3f64.sqrt();
    let mut k = 1.0;
    for i in 0..a.len() {
        let t = s3 * (a[i] - b[i]).abs() / lengths[i];
        k *= (1.0 + t) * (-t).exp();
    }
    k
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite oracle input")
}

fn approx(x: &BigRational) -> f64 {
    x.to_f64().expect("representable oracle output")
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gauss-Jordan inverse and determinant in exact rational arithmetic.
fn invert(mut a: Vec<Vec<BigRational>>) -> (Vec<Vec<BigRational>>, BigRational) {
    let m = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    let mut det = BigRational::one();
    for c in 0..m {
        let p = (c..m).find(|&r| !a[r][c].is_zero()).expect("oracle matrix invertible");
        if p != c {
            a.swap(p, c);
            inv.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det *= &pivot;
        for j in 0..m {
            a[c][j] /= &pivot;
            inv[c][j] /= &pivot;
        }
        for r in 0..m {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for j in 0..m {
                let (ac, ic) = (&a[c][j] * &f, &inv[c][j] * &f);
                a[r][j] -= ac;
                inv[r][j] -= ic;
            }
        }
    }
    (inv, det)
}

/// Ordinary kriging from an explicit inverse and determinant, computed
/// exactly over the rationals from the f64 correlation entries.
pub struct DenseKriging {
    points: Vec<Vec<f64>>,
    lengths: Vec<f64>,
    nugget: f64,
    kinv: Vec<Vec<BigRational>>,
    mu_exact: BigRational,
    sigma2_exact: BigRational,
    resid_weights: Vec<BigRational>,
    ones_weight: BigRational,
    pub mu: f64,
    pub sigma2: f64,
    pub psi: f64,
}

impl DenseKriging {
    pub fn new(points: &[Vec<f64>], y: &[f64], lengths: &[f64], nugget: f64) -> Self {
        let m = points.len();
        let k: Vec<Vec<BigRational>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let base = exact(matern(&points[i], &points[j], lengths));
                        if i == j {
                            base + exact(nugget)
                        } else {
                            base
                        }
                    })
                    .collect()
            })
            .collect();
        let (kinv, det) = invert(k);
        let yv: Vec<BigRational> = y.iter().map(|v| exact(*v)).collect();
        let row_sums: Vec<BigRational> = kinv.iter().map(|row| row.iter().sum()).collect();
        let ones_weight: BigRational = row_sums.iter().sum();
        let mu_exact = dot(&row_sums, &yv) / &ones_weight;
        let resid: Vec<BigRational> = yv.iter().map(|v| v - &mu_exact).collect();
        let resid_weights: Vec<BigRational> = kinv.iter().map(|row| dot(row, &resid)).collect();
        let sigma2_exact = dot(&resid, &resid_weights) / BigRational::from_integer(m.into());
        let sigma2 = approx(&sigma2_exact).max(0.0);
        let psi = sigma2 * approx(&det).powf(1.0 / m as f64);
        DenseKriging {
            points: points.to_vec(),
            lengths: lengths.to_vec(),
            nugget,
            mu: approx(&mu_exact),
            kinv,
            mu_exact,
            sigma2_exact,
            resid_weights,
            ones_weight,
            sigma2,
            psi,
        }
    }

    fn r(&self, x: &[f64]) -> Vec<BigRational> {
        self.points
            .iter()
            .map(|p| {
                if p.as_slice() == x {
                    exact(1.0 + self.nugget)
                } else {
                    exact(matern(x, p, &self.lengths))
                }
            })
            .collect()
    }

    pub fn predict(&self, x: &[f64]) -> (f64, f64) {
        let r = self.r(x);
        let mean = &self.mu_exact + dot(&r, &self.resid_weights);
        let kr: Vec<BigRational> = self.kinv.iter().map(|row| dot(row, &r)).collect();
        let u0 = kr.iter().sum::<BigRational>() - BigRational::one();
        let var = &self.sigma2_exact * (BigRational::one() - dot(&r, &kr) + &u0 * &u0 / &self.ones_weight);
        (approx(&mean), approx(&var).max(0.0))
    }
}

/// Exact Voronoi cell areas in the unit square via half-plane clipping.
pub fn voronoi_areas(sites: &[[f64; 2]]) -> Vec<f64> {
    sites
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut poly = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
            for (j, t) in sites.iter().enumerate() {
                if i == j {
                    continue;
                }
                // Keep points with n·x <= c, closer to s than to t.
                let n = [t[0] - s[0], t[1] - s[1]];
                let c = (t[0] * t[0] + t[1] * t[1] - s[0] * s[0] - s[1] * s[1]) / 2.0;
                poly = clip(&poly, n, c);
            }
            shoelace(&poly)
        })
        .collect()
}

fn clip(poly: &[[f64; 2]], n: [f64; 2], c: f64) -> Vec<[f64; 2]> {
    let side = |p: &[f64; 2]| n[0] * p[0] + n[1] * p[1] - c;
    let mut out = Vec::new();
    for k in 0..poly.len() {
        let a = poly[k];
        let b = poly[(k + 1) % poly.len()];
        let (fa, fb) = (side(&a), side(&b));
        if fa <= 0.0 {
            out.push(a);
        }
        if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
            let t = fa / (fa - fb);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}

fn shoelace(poly: &[[f64; 2]]) -> f64 {
    let mut s = 0.0;
    for k in 0..poly.len() {
        let a = poly[k];
        let b = poly[(k + 1) % poly.len()];
        s += a[0] * b[1] - b[0] * a[1];
    }
    s.abs() / 2.0
}

#[derive(Debug, Clone, PartialEq)]
pub enum BruteDecision {
    Candidate(Vec<f64>),
    Substitute(Vec<f64>),
    Fallback,
}

/// The whole exploitation step written out with plain loops and sorts.
pub fn brute_exploit(
    samples: &[Vec<f64>],
    labels: &[Class],
    pool: &[Vec<f64>],
    variance: impl Fn(&[f64]) -> f64,
) -> (Option<usize>, BruteDecision) {
    let m = samples.len();
    let n = samples[0].len();
    let mut counts = vec![0usize; m];
    let mut owner = Vec::with_capacity(pool.len());
    for p in pool {
        let mut best = 0;
        for i in 1..m {
            if dist(p, &samples[i]) < dist(p, &samples[best]) {
                best = i;
            }
        }
        counts[best] += 1;
        owner.push(best);
    }
    let k = (2 * n).min(m - 1);
    let mut x_max: Option<(usize, f64)> = None;
    for i in 0..m {
        if labels[i] != Class::Minor {
            continue;
        }
        let mut others: Vec<(f64, usize)> =
            (0..m).filter(|&j| j != i).map(|j| (dist(&samples[i], &samples[j]), j)).collect();
        others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let majors = others[..k].iter().filter(|(_, j)| labels[*j] == Class::Major).count();
        let score = counts[i] as f64 / pool.len() as f64 * majors as f64;
        if x_max.is_none_or(|(_, s)| score > s) {
            x_max = Some((i, score));
        }
    }
    let Some((xm, _)) = x_max else {
        return (None, BruteDecision::Fallback);
    };
    let p_max: Vec<&Vec<f64>> = pool.iter().zip(&owner).filter(|(_, o)| **o == xm).map(|(p, _)| p).collect();
    let majors: Vec<&Vec<f64>> = samples.iter().zip(labels).filter(|(_, l)| **l == Class::Major).map(|(s, _)| s).collect();
    if p_max.is_empty() || majors.is_empty() {
        return (Some(xm), BruteDecision::Fallback);
    }
    let mut cand = (0, f64::INFINITY);
    for (a, p) in p_max.iter().enumerate() {
        for s in &majors {
            let d = dist(p, s);
            if d < cand.1 {
                cand = (a, d);
            }
        }
    }
    let mut widest = 0.0f64;
    for i in 0..m {
        let nn = (0..m).filter(|&j| j != i).map(|j| dist(&samples[i], &samples[j])).fold(f64::INFINITY, f64::min);
        widest = widest.max(nn);
    }
    let spacing = 0.1 * widest;
    let clear = |x: &[f64]| samples.iter().all(|s| dist(x, s) > spacing);
    let c = p_max[cand.0];
    if clear(c) {
        return (Some(xm), BruteDecision::Candidate(c.clone()));
    }
    let mut sub = (0, f64::NEG_INFINITY);
    for (a, p) in p_max.iter().enumerate() {
        let v = variance(p);
        if v > sub.1 {
            sub = (a, v);
        }
    }
    let s = p_max[sub.0];
    if clear(s) {
        (Some(xm), BruteDecision::Substitute(s.clone()))
    } else {
        (Some(xm), BruteDecision::Fallback)
    }
}

/// Mean and standard deviation of the random-exploration count over
/// independent chains; `chain_rng` supplies each chain's uniform stream.
pub fn simulate_switching<R: rand::Rng>(
    r0: f64,
    alpha: f64,
    iterations: usize,
    chains: usize,
    mut chain_rng: impl FnMut(u64) -> R,
) -> (f64, f64) {
    let mut sum = 0.0;
    let mut sum2 = 0.0;
    for chain in 0..chains as u64 {
        let mut rng = chain_rng(chain);
        let mut r = r0;
        let mut k = 0u32;
        for _ in 0..iterations {
            if rng.random::<f64>() < r {
                k += 1;
                r /= alpha;
            }
        }
        sum += k as f64;
        sum2 += (k as f64) * (k as f64);
    }
    let mean = sum / chains as f64;
    (mean, (sum2 / chains as f64 - mean * mean).sqrt())
}

/// Exact expected random-exploration count by dynamic programming over k.
pub fn expected_switching(r0: f64, alpha: f64, iterations: usize) -> f64 {
    let mut dist = vec![0.0; iterations + 1];
    dist[0] = 1.0;
    for _ in 0..iterations {
        let mut next = vec![0.0; iterations + 1];
        for (k, p) in dist.iter().enumerate() {
            if *p == 0.0 {
                continue;
            }
            let r = r0 / alpha.powi(k as i32);
            next[k] += p * (1.0 - r);
            if k < iterations {
                next[k + 1] += p * r;
            }
        }
        dist = next;
    }
    dist.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
}
