use std::f64::consts::PI;

/// Smooth Higdon-type response on `[-10, 10]`, shifted down by 0.5.
pub fn higdon(x: f64) -> f64 {
    (2.0 * PI * x / 10.0).sin() + 0.2 * (2.0 * PI * x / 2.5).sin() - 0.5
}

/// Discontinuous, non-periodic variant of [`higdon`].
pub fn modified_higdon(x: f64) -> f64 {
    if x < 0.0 {
        higdon(x)
    } else if x < 4.0 {
        -(-x).exp() + 0.1 * x
    } else {
        -0.1 * x.sin() - 0.06
    }
}

/// One-dimensional Michalewicz-type response on `[-10, 0]`.
pub fn michalewicz1d(x: f64) -> f64 {
    -0.6 * x.sin() * (x * x / PI).sin().powi(20) - 0.1
}

/// Denominator of the radial branch of [`modified_dropwave`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum DropWaveDenominator {
    /// `0.5 (x1² + x2²) + 2`
    Radial,
    /// `0.5 (1 + x2²) + 2`
    UnitFirst,
}

/// Drop-Wave response split along the diagonal: `1 - |x1 x2|` above it,
/// a damped radial wave (shifted up by 0.05) on and below it.
pub fn modified_dropwave(x: [f64; 2], denominator: DropWaveDenominator) -> f64 {
    let [x1, x2] = x;
    if x2 > x1 {
        return 1.0 - (x1 * x2).abs();
    }
    let r2 = x1 * x1 + x2 * x2;
    let first = match denominator {
        DropWaveDenominator::Radial => x1 * x1,
        DropWaveDenominator::UnitFirst => 1.0,
    };
    -(1.0 + (12.0 * r2.sqrt()).cos()) / (0.5 * (first + x2 * x2) + 2.0) + 0.05
}
