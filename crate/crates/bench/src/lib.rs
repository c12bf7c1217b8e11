//! Parameter points shared by the criterion benchmarks.

use besselexp::PosteriorParams;

/// `(η, β0)` pairs spanning the regimes of the sampler: a wide posterior,
/// the efficiency dip near β0 = 0, mass piled at zero, and a sharp peak.
pub const POINTS: [(f64, f64); 5] = [(1.0, 0.0), (10.0, -0.9), (10.0, 0.0), (10.0, 0.9), (100.0, -0.5)];

pub fn posterior(eta: f64, beta0: f64) -> PosteriorParams {
    PosteriorParams::new(eta, beta0).expect("valid benchmark point")
}

/// Label used in benchmark ids.
pub fn label(eta: f64, beta0: f64) -> String {
    format!("eta={eta}/beta0={beta0}")
}
