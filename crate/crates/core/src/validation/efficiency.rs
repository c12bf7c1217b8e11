//! Expected acceptance across a β0 grid, for the closed-form and the
//! numerically optimal envelopes, with optional empirical checks.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::sampler::{KappaSampler, Method, SampleStats};
use crate::tuning::{approx_tune, expected_acceptance, oracle_tune, PosteriorParams, WMode};

/// Settings for [`efficiency_sweep`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub etas: Vec<f64>,
    /// Number of β0 values in (−1, 1); at least 10.
    pub grid: usize,
    pub w_mode: WMode,
    /// Proposals per point for the empirical rate; `None` skips it.
    pub empirical: Option<u64>,
    pub seed: u64,
    /// Worker threads; results do not depend on this.
    pub jobs: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            etas: vec![1.0, 10.0, 100.0],
            grid: 200,
            w_mode: WMode::Winitzki,
            empirical: None,
            seed: 0,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EfficiencyPoint {
    pub beta0: f64,
    pub eff_approx: f64,
    pub eff_oracle: f64,
    /// Observed acceptance rate and its binomial standard error.
    pub empirical: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyCurve {
    pub eta: f64,
    pub points: Vec<EfficiencyPoint>,
}

/// `β0_i = −1 + (2i + 1)/n`: n midpoints of equal cells covering (−1, 1).
///
/// Grids of size n and k·n share points exactly when k is odd.
pub fn beta0_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| -1.0 + (2 * i + 1) as f64 / n as f64).collect()
}

/// Acceptance rate over at least `proposals` proposals.
pub fn empirical_acceptance(
    post: &PosteriorParams,
    w_mode: WMode,
    proposals: u64,
    rng: &mut RngStream,
) -> Result<(f64, f64)> {
    let env = approx_tune(post, w_mode);
    let sampler = KappaSampler::new(post, &env, Method::Squeezed);
    let mut stats = SampleStats::default();
    while stats.proposals < proposals {
        sampler.sample(rng, &mut stats)?;
    }
    let p = stats.acceptance_rate();
    Ok((p, (p * (1.0 - p) / stats.proposals as f64).sqrt()))
}

fn sweep_point(eta: f64, beta0: f64, config: &SweepConfig, rng: Option<RngStream>) -> Result<EfficiencyPoint> {
    let post = PosteriorParams::new(eta, beta0)?;
    let eff_approx = expected_acceptance(&post, &approx_tune(&post, config.w_mode))?;
    let eff_oracle = expected_acceptance(&post, &oracle_tune(&post)?)?;
    let empirical = match (config.empirical, rng) {
        (Some(n), Some(mut rng)) => Some(empirical_acceptance(&post, config.w_mode, n, &mut rng)?),
        _ => None,
    };
    Ok(EfficiencyPoint {
        beta0,
        eff_approx,
        eff_oracle,
        empirical,
    })
}

/// Computes one curve per η. Point `i` of curve `j` draws from substream
/// `j·2³² + i` of `seed`, so output is independent of `jobs`.
pub fn efficiency_sweep(config: &SweepConfig) -> Result<Vec<EfficiencyCurve>> {
    if config.grid < 10 {
        return Err(Error::InvalidArgument(format!(
            "grid must have at least 10 points, got {}",
            config.grid
        )));
    }
    if config.jobs == 0 {
        return Err(Error::InvalidArgument("jobs must be at least 1".into()));
    }
    for &eta in &config.etas {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidArgument(format!("eta must be positive, got {eta}")));
        }
    }
    let grid = beta0_grid(config.grid);
    let root = RngStream::new(config.seed);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        config
            .etas
            .iter()
            .enumerate()
            .map(|(j, &eta)| {
                let points = grid
                    .par_iter()
                    .enumerate()
                    .map(|(i, &b0)| {
                        let rng = config.empirical.map(|_| root.split(((j as u64) << 32) + i as u64));
                        sweep_point(eta, b0, config, rng)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(EfficiencyCurve { eta, points })
            })
            .collect()
    })
}

impl EfficiencyCurve {
    /// Grid point with the lowest closed-form efficiency.
    pub fn min_approx(&self) -> EfficiencyPoint {
        *self
            .points
            .iter()
            .min_by(|a, b| a.eff_approx.total_cmp(&b.eff_approx))
            .expect("curve has points")
    }

    /// Writes `beta0,eff_approx,eff_oracle[,eff_empirical,se]`, one row per point.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let with_empirical = self.points.iter().any(|p| p.empirical.is_some());
        if with_empirical {
            writeln!(w, "beta0,eff_approx,eff_oracle,eff_empirical,se")?;
        } else {
            writeln!(w, "beta0,eff_approx,eff_oracle")?;
        }
        for p in &self.points {
            write!(w, "{},{},{}", sig9(p.beta0), sig9(p.eff_approx), sig9(p.eff_oracle))?;
            if with_empirical {
                let (e, se) = p.empirical.unwrap_or((f64::NAN, f64::NAN));
                write!(w, ",{},{}", sig9(e), sig9(se))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

/// Nine significant digits, `%.9g` style.
pub fn sig9(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let fixed = format!("{:.*}", (8 - exp).max(0) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
