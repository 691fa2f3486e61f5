//! Shared fixtures for the benchmarks.

use mivor_core::problems::DropWaveReading;
use mivor_core::{tplhd, Benchmark, ClassRule, Dataset, KrigingModel, NuggetPolicy, Problem, SwarmConfig};

/// A space-filling design on a built-in benchmark, with its responses.
pub fn design(benchmark: Benchmark, points: usize) -> Dataset {
    let mut problem = Problem::benchmark(benchmark);
    let dim = problem.domain().dim();
    let x = tplhd(points, dim);
    let y = x.iter().map(|u| problem.evaluate_normalized(u).expect("benchmark evaluates")).collect();
    Dataset::new(x, y, ClassRule::new(0.0)).expect("valid design")
}

pub fn fitted(benchmark: Benchmark, points: usize) -> KrigingModel {
    KrigingModel::fit(design(benchmark, points), &SwarmConfig::default(), &NuggetPolicy::default())
        .expect("fit succeeds")
}

pub const DROPWAVE: Benchmark = Benchmark::DropWave(DropWaveReading::CALIBRATED);
