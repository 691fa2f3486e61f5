//! Domain and denominator readings for the modified Drop-Wave benchmark.
//!
//! The printed domain of this benchmark is garbled, so every sign-restored
//! reading of the bracket literals is scored by brute force on a regular grid:
//! the fraction of the domain in the minor class and the number of its
//! connected components. The reading matching the expected structure is used
//! by default.

use serde::{Deserialize, Serialize};

use super::functions::{modified_dropwave, DropWaveDenominator};

/// Target minor-class fraction (1475 of 10000 reference points).
pub const TARGET_MINOR_FRACTION: f64 = 0.1475;
/// Expected number of disconnected minor subdomains.
pub const TARGET_COMPONENTS: usize = 3;
/// Accepted deviation from the target fraction.
pub const FRACTION_TOLERANCE: f64 = 0.02;
/// Components smaller than this share of grid cells are ignored.
const MIN_COMPONENT_SHARE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DropWaveReading {
    pub lower: [f64; 2],
    pub upper: [f64; 2],
    pub denominator: DropWaveDenominator,
}

impl DropWaveReading {
    /// Corner reading `(1, 0) – (2, 2)` with the radial denominator.
    pub const CALIBRATED: DropWaveReading = DropWaveReading {
        lower: [1.0, 0.0],
        upper: [2.0, 2.0],
        denominator: DropWaveDenominator::Radial,
    };

    pub fn describe(&self) -> String {
        let den = match self.denominator {
            DropWaveDenominator::Radial => "0.5(x1^2+x2^2)+2",
            DropWaveDenominator::UnitFirst => "0.5(1+x2^2)+2",
        };
        format!(
            "x1 in [{}, {}], x2 in [{}, {}], denominator {den}",
            self.lower[0], self.upper[0], self.lower[1], self.upper[1]
        )
    }

    /// Every sign-restored reading of the literals `[1,0] x [2,2]`, read
    /// either as per-axis intervals or as lower/upper corners.
    pub fn candidates() -> Vec<DropWaveReading> {
        let mut out = Vec::new();
        for a in [1.0, -1.0] {
            for c in [2.0, -2.0] {
                for d in [2.0, -2.0] {
                    let boxes = [
                        ([a, c], [0.0, d]), // x1 in [a, 0], x2 in [c, d]
                        ([a, 0.0], [c, d]), // corners (a, 0) and (c, d)
                    ];
                    for (lower, upper) in boxes {
                        if lower[0] >= upper[0] || lower[1] >= upper[1] {
                            continue;
                        }
                        for denominator in [DropWaveDenominator::Radial, DropWaveDenominator::UnitFirst] {
                            let r = DropWaveReading { lower, upper, denominator };
                            if !out.contains(&r) {
                                out.push(r);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DropWaveCandidate {
    pub reading: DropWaveReading,
    pub minor_fraction: f64,
    pub components: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub candidates: Vec<DropWaveCandidate>,
    pub selected: Option<DropWaveReading>,
}

fn score(reading: &DropWaveReading, grid: usize) -> DropWaveCandidate {
    let cell = |i: usize, lo: f64, hi: f64| lo + (hi - lo) * (i as f64 + 0.5) / grid as f64;
    let minor: Vec<bool> = (0..grid * grid)
        .map(|k| {
            let x1 = cell(k / grid, reading.lower[0], reading.upper[0]);
            let x2 = cell(k % grid, reading.lower[1], reading.upper[1]);
            modified_dropwave([x1, x2], reading.denominator) >= 0.0
        })
        .collect();
    let fraction = minor.iter().filter(|&&m| m).count() as f64 / minor.len() as f64;

    let min_size = (MIN_COMPONENT_SHARE * (grid * grid) as f64).ceil() as usize;
    let mut seen = vec![false; minor.len()];
    let mut components = 0;
    let mut stack = Vec::new();
    for start in 0..minor.len() {
        if !minor[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut size = 0;
        while let Some(k) = stack.pop() {
            size += 1;
            let (i, j) = (k / grid, k % grid);
            let mut visit = |ii: usize, jj: usize| {
                let q = ii * grid + jj;
                if minor[q] && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            };
            if i > 0 {
                visit(i - 1, j);
            }
            if i + 1 < grid {
                visit(i + 1, j);
            }
            if j > 0 {
                visit(i, j - 1);
            }
            if j + 1 < grid {
                visit(i, j + 1);
            }
        }
        if size >= min_size {
            components += 1;
        }
    }
    DropWaveCandidate {
        reading: *reading,
        minor_fraction: fraction,
        components,
    }
}

/// Scores every candidate reading on a `grid × grid` lattice and selects the
/// one with the expected component count whose minor fraction is closest to
/// the target, provided it lies within tolerance.
pub fn calibrate_dropwave(grid: usize) -> CalibrationReport {
    let candidates: Vec<DropWaveCandidate> = DropWaveReading::candidates()
        .iter()
        .map(|r| score(r, grid))
        .collect();
    let selected = candidates
        .iter()
        .filter(|c| c.components == TARGET_COMPONENTS)
        .filter(|c| (c.minor_fraction - TARGET_MINOR_FRACTION).abs() <= FRACTION_TOLERANCE)
        .min_by(|a, b| {
            let da = (a.minor_fraction - TARGET_MINOR_FRACTION).abs();
            let db = (b.minor_fraction - TARGET_MINOR_FRACTION).abs();
            da.total_cmp(&db)
        })
        .map(|c| c.reading);
    CalibrationReport { candidates, selected }
}
