//! Exact samplers for the Bessel exponential distribution.
//!
//! Both loops draw `x ~ Gamma(ηα + 1, ηβ)`, discard `x < ε`, set `κ = x − ε`
//! and accept when
//!
//! ```text
//! v = log(u)/η − (β − β0)(κ − κ0) + α log((κ + ε)/(κ0 + ε)) − log I0(κ0) + guard
//! v < −log I0(κ)
//! ```
//!
//! where `guard = max(0, g(0) − g(κ0))`. The squeezed loop brackets
//! `−log I0(κ)` between `c6 − log(1 + 1/(2κ))` and `c6 = ½log(2πκ) − κ` and
//! only evaluates the Bessel function when `v` falls between the two. Given
//! the same stream, both loops make identical decisions.

use std::fmt;
use std::ops::AddAssign;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::special::log_bessel_i0;
use crate::tuning::{approx_tune, Envelope, PosteriorParams, WMode};

/// Proposals allowed for a single draw before the loop gives up.
pub const DEFAULT_ITERATION_CAP: u64 = 1_000_000;

/// Below this κ the lower squeeze `I0(κ) > exp(κ)/√(2πκ)` is not used.
/// (The bound itself holds from κ ≈ 0.25789.)
const SQUEEZE_GATE: f64 = 0.258;

// ½ log(2π)
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Upper bound on `c6 − log(1 + 1/(2κ))` over `0 < κ < 0.258`. The
/// expression increases in κ and is about −1.094 at the gate.
const SMALL_KAPPA_SQUEEZE_MAX: f64 = -1.0;

/// `c6 = ½log(2πκ) − κ`, a lower bound on `−log I0(κ)` for κ > 0.259.
#[inline]
fn lower_squeeze(kappa: f64) -> f64 {
    HALF_LN_2PI + 0.5 * kappa.ln() - kappa
}

/// Counters for one or more sampler runs.
///
/// `proposals = truncation_rejects + accepted + loop_rejects` always holds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SampleStats {
    pub proposals: u64,
    pub accepted: u64,
    pub truncation_rejects: u64,
    pub loop_rejects: u64,
    pub squeeze_accepts: u64,
    pub squeeze_rejects: u64,
    pub bessel_evals: u64,
}

impl SampleStats {
    /// Accepted draws per proposal, truncation discards included.
    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.proposals as f64
    }

    /// Fraction of accept/reject decisions that needed `log I0(κ)`.
    pub fn bessel_fraction(&self) -> f64 {
        self.bessel_evals as f64 / (self.proposals - self.truncation_rejects) as f64
    }

    pub fn is_conserved(&self) -> bool {
        self.proposals == self.truncation_rejects + self.accepted + self.loop_rejects
            && self.bessel_evals + self.squeeze_accepts + self.squeeze_rejects
                <= self.proposals - self.truncation_rejects
    }
}

impl AddAssign for SampleStats {
    fn add_assign(&mut self, o: Self) {
        self.proposals += o.proposals;
        self.accepted += o.accepted;
        self.truncation_rejects += o.truncation_rejects;
        self.loop_rejects += o.loop_rejects;
        self.squeeze_accepts += o.squeeze_accepts;
        self.squeeze_rejects += o.squeeze_rejects;
        self.bessel_evals += o.bessel_evals;
    }
}

/// Which rejection loop to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Plain,
    #[default]
    Squeezed,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Plain, Method::Squeezed];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Plain => "plain",
            Method::Squeezed => "squeezed",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Method::Plain),
            "squeezed" => Ok(Method::Squeezed),
            other => Err(Error::InvalidArgument(format!(
                "unknown method '{other}' (expected plain|squeezed)"
            ))),
        }
    }
}

/// Marsaglia–Tsang gamma generator with precomputed constants.
#[derive(Debug, Clone, Copy)]
pub(crate) struct GammaSampler {
    d: f64,
    c: f64,
    scale: f64,
    // shape < 1: draw with shape + 1 and multiply by U^(1/shape)
    boost: Option<f64>,
}

impl GammaSampler {
    pub(crate) fn new(shape: f64, rate: f64) -> Self {
        let (base, boost) = if shape < 1.0 {
            (shape + 1.0, Some(1.0 / shape))
        } else {
            (shape, None)
        };
        let d = base - 1.0 / 3.0;
        Self {
            d,
            c: 1.0 / (9.0 * d).sqrt(),
            scale: 1.0 / rate,
            boost,
        }
    }

    #[inline]
    pub(crate) fn sample(&self, rng: &mut RngStream) -> f64 {
        let x = loop {
            let z = rng.standard_normal();
            let t = 1.0 + self.c * z;
            if t <= 0.0 {
                continue;
            }
            let v = t * t * t;
            let u = rng.uniform();
            let z2 = z * z;
            if u < 1.0 - 0.0331 * z2 * z2 || u.ln() < 0.5 * z2 + self.d * (1.0 - v + v.ln()) {
                break self.d * v;
            }
        };
        match self.boost {
            None => x * self.scale,
            Some(inv_shape) => x * rng.uniform().powf(inv_shape) * self.scale,
        }
    }
}

/// One `Gamma(shape, rate)` variate (rate parameterization, mean `shape/rate`).
pub fn gamma_variate(shape: f64, rate: f64, rng: &mut RngStream) -> f64 {
    GammaSampler::new(shape, rate).sample(rng)
}

/// `Gamma(shape, rate)` conditioned on `x ≥ lower`, by retrying.
pub fn truncated_gamma_variate(shape: f64, rate: f64, lower: f64, rng: &mut RngStream) -> f64 {
    let g = GammaSampler::new(shape, rate);
    loop {
        let x = g.sample(rng);
        if x >= lower {
            return x;
        }
    }
}

/// A tuned rejection sampler, ready to produce draws.
#[derive(Debug, Clone)]
pub struct KappaSampler {
    gamma: GammaSampler,
    method: Method,
    cap: u64,
    inv_eta: f64,
    dbeta: f64,
    alpha: f64,
    epsilon: f64,
    log_epsilon: f64,
    kappa0: f64,
    log_shift0: f64,
    // log I0(κ0) − guard
    offset: f64,
}

impl KappaSampler {
    pub fn new(post: &PosteriorParams, env: &Envelope, method: Method) -> Self {
        Self {
            gamma: GammaSampler::new(env.proposal_shape(post), env.proposal_rate(post)),
            method,
            cap: DEFAULT_ITERATION_CAP,
            inv_eta: 1.0 / post.eta(),
            dbeta: env.beta - post.beta0(),
            alpha: env.alpha,
            epsilon: env.epsilon,
            log_epsilon: env.log_epsilon,
            kappa0: env.kappa0,
            log_shift0: (env.kappa0 + env.epsilon).ln(),
            offset: env.log_i0_kappa0 - env.exactness_guard(),
        }
    }

    pub fn with_iteration_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// The accept statistic `v` (accept iff `v < −log I0(κ)`) and `log(κ + ε)`.
    #[inline]
    fn v(&self, kappa: f64, u: f64) -> (f64, f64) {
        let log_shift = if kappa == 0.0 {
            self.log_epsilon
        } else {
            (kappa + self.epsilon).ln()
        };
        let shift = if self.alpha == 0.0 {
            0.0
        } else {
            self.alpha * (log_shift - self.log_shift0)
        };
        let v = u.ln() * self.inv_eta - self.dbeta * (kappa - self.kappa0) + shift - self.offset;
        (v, log_shift)
    }

    #[inline]
    fn decide_plain(&self, kappa: f64, u: f64, stats: &mut SampleStats) -> bool {
        stats.bessel_evals += 1;
        self.v(kappa, u).0 < -log_bessel_i0(kappa)
    }

    #[inline]
    fn decide_squeezed(&self, kappa: f64, u: f64, stats: &mut SampleStats) -> bool {
        let (v, log_shift) = self.v(kappa, u);
        if kappa < SQUEEZE_GATE {
            if v >= SMALL_KAPPA_SQUEEZE_MAX {
                // the accept squeeze cannot fire here
                stats.bessel_evals += 1;
                return v < -log_bessel_i0(kappa);
            }
            return self.squeezed_exact(kappa, v, stats);
        }
        // Bracket c6 from log(κ + ε), which v already needed. With
        // t = ε/(κ + ε), log κ = log(κ + ε) + log(1 − t) and
        //   −t − t²/2 − t²ε/(3κ) ≤ log(1 − t) ≤ −t − t²/2 − t³/3,
        // while x − x²/2 ≤ log(1 + x) ≤ x − x²/2 + x³/3 for x ≥ 0. Most
        // proposals are settled without another logarithm; the rest take
        // the exact comparison.
        let x = 0.5 / kappa;
        let t = self.epsilon / (kappa + self.epsilon);
        let margin = 1e-12 * (1.0 + v.abs() + kappa);
        let head = 0.5 * t * (1.0 + 0.5 * t);
        let base = HALF_LN_2PI + 0.5 * log_shift - kappa - head;
        let c6_lo = base - t * t * self.epsilon * x / 3.0 - margin;
        let c6_hi = base - t * t * t / 6.0 + margin;
        let l1p_lo = x * (1.0 - 0.5 * x);
        let l1p_hi = l1p_lo + x * x * x / 3.0;
        if v >= c6_hi {
            stats.squeeze_rejects += 1;
            false
        } else if v < c6_lo - l1p_hi {
            stats.squeeze_accepts += 1;
            true
        } else if v < c6_lo && v >= c6_hi - l1p_lo {
            stats.bessel_evals += 1;
            v < -log_bessel_i0(kappa)
        } else {
            self.squeezed_exact(kappa, v, stats)
        }
    }

    #[inline]
    fn squeezed_exact(&self, kappa: f64, v: f64, stats: &mut SampleStats) -> bool {
        let c6 = lower_squeeze(kappa);
        if kappa < SQUEEZE_GATE || v < c6 {
            if v < c6 - (0.5 / kappa).ln_1p() {
                stats.squeeze_accepts += 1;
                return true;
            }
            stats.bessel_evals += 1;
            v < -log_bessel_i0(kappa)
        } else {
            stats.squeeze_rejects += 1;
            false
        }
    }

    /// Runs the loop until one proposal is accepted, adding to `stats`.
    pub fn sample(&self, rng: &mut RngStream, stats: &mut SampleStats) -> Result<f64> {
        let mut local = SampleStats::default();
        let result = match self.method {
            Method::Plain => self.sample_inner::<false>(rng, &mut local),
            Method::Squeezed => self.sample_inner::<true>(rng, &mut local),
        };
        *stats += local;
        result.ok_or(Error::IterationCap {
            cap: self.cap,
            stats: local,
        })
    }

    #[inline]
    fn sample_inner<const SQUEEZED: bool>(&self, rng: &mut RngStream, stats: &mut SampleStats) -> Option<f64> {
        for _ in 0..self.cap {
            stats.proposals += 1;
            let x = self.gamma.sample(rng);
            if x < self.epsilon {
                stats.truncation_rejects += 1;
                continue;
            }
            let kappa = x - self.epsilon;
            let u = rng.uniform();
            let accept = if SQUEEZED {
                self.decide_squeezed(kappa, u, stats)
            } else {
                self.decide_plain(kappa, u, stats)
            };
            if accept {
                stats.accepted += 1;
                return Some(kappa);
            }
            stats.loop_rejects += 1;
        }
        None
    }
}

/// One draw with the plain loop (a Bessel evaluation per proposal).
pub fn sample_kappa(post: &PosteriorParams, env: &Envelope, rng: &mut RngStream) -> Result<(f64, SampleStats)> {
    let mut stats = SampleStats::default();
    let k = KappaSampler::new(post, env, Method::Plain).sample(rng, &mut stats)?;
    Ok((k, stats))
}

/// One draw with the squeezed loop.
pub fn sample_kappa_squeezed(
    post: &PosteriorParams,
    env: &Envelope,
    rng: &mut RngStream,
) -> Result<(f64, SampleStats)> {
    let mut stats = SampleStats::default();
    let k = KappaSampler::new(post, env, Method::Squeezed).sample(rng, &mut stats)?;
    Ok((k, stats))
}

/// Tunes once with [`approx_tune`] and draws `n` values.
pub fn sample_batch(
    post: &PosteriorParams,
    n: usize,
    method: Method,
    w_mode: WMode,
    rng: &mut RngStream,
) -> Result<(Vec<f64>, SampleStats)> {
    if n == 0 {
        return Err(Error::InvalidArgument("batch size must be at least 1".into()));
    }
    let env = approx_tune(post, w_mode);
    let sampler = KappaSampler::new(post, &env, method);
    let mut stats = SampleStats::default();
    let draws = (0..n)
        .map(|_| sampler.sample(rng, &mut stats))
        .collect::<Result<Vec<_>>>()?;
    Ok((draws, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gl20_integral;
    use crate::special::ln_gamma;
    use crate::tuning::expected_acceptance;
    use crate::validation::ks::ks_one_sample;

    fn post(eta: f64, b0: f64) -> PosteriorParams {
        PosteriorParams::new(eta, b0).unwrap()
    }

    /// Gamma CDF at each sorted sample by cumulative GL20 integration of
    /// the density between consecutive points.
    fn gamma_cdf_at_sorted(sorted: &[f64], shape: f64, rate: f64) -> Vec<f64> {
        let lnorm = shape * rate.ln() - ln_gamma(shape);
        let dens = |x: f64| {
            if x <= 0.0 {
                0.0
            } else {
                (lnorm + (shape - 1.0) * x.ln() - rate * x).exp()
            }
        };
        let mut acc = 0.0;
        let mut prev = 0.0;
        sorted
            .iter()
            .map(|&x| {
                acc += gl20_integral(dens, prev, x);
                prev = x;
                acc
            })
            .collect()
    }

    fn ks_p_from_values(sorted_cdf: &[f64]) -> f64 {
        // the values are F(x_(i)) for sorted x: test them for uniformity
        ks_one_sample(sorted_cdf, |u| u.clamp(0.0, 1.0)).p_value
    }

    #[test]
    fn gamma_shape_one_is_exponential() {
        let mut rng = RngStream::new(11);
        let rate = 1.7;
        let xs: Vec<f64> = (0..100_000).map(|_| gamma_variate(1.0, rate, &mut rng)).collect();
        let r = ks_one_sample(&xs, |x| 1.0 - (-rate * x).exp());
        assert!(r.p_value > 0.01, "p = {}", r.p_value);
    }

    #[test]
    fn gamma_mean() {
        let mut rng = RngStream::new(12);
        let n = 100_000;
        let mean = (0..n).map(|_| gamma_variate(5.0, 2.0, &mut rng)).sum::<f64>() / n as f64;
        let se = (5.0f64).sqrt() / 2.0 / (n as f64).sqrt();
        assert!((mean - 2.5).abs() < 4.0 * se);
    }

    #[test]
    fn gamma_matches_quadrature_cdf() {
        let mut rng = RngStream::new(13);
        let mut xs: Vec<f64> = (0..100_000).map(|_| gamma_variate(2.5, 1.0, &mut rng)).collect();
        xs.sort_by(f64::total_cmp);
        let f = gamma_cdf_at_sorted(&xs, 2.5, 1.0);
        assert!(ks_p_from_values(&f) > 0.01);
        // shape below one goes through the boost path
        let mut xs: Vec<f64> = (0..100_000).map(|_| gamma_variate(0.4, 3.0, &mut rng)).collect();
        xs.sort_by(f64::total_cmp);
        let f = gamma_cdf_at_sorted(&xs, 0.4, 3.0);
        assert!(ks_p_from_values(&f) > 0.01);
    }

    #[test]
    fn truncated_gamma() {
        let mut a = RngStream::new(14);
        let mut b = RngStream::new(14);
        for _ in 0..100 {
            assert_eq!(
                truncated_gamma_variate(3.0, 1.0, 0.0, &mut a),
                gamma_variate(3.0, 1.0, &mut b)
            );
        }
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| truncated_gamma_variate(3.0, 1.0, 0.5, &mut a)).collect();
        assert!(xs.iter().all(|&x| x >= 0.5));
        // quadrature oracle for the truncated mean and variance
        let dens = |x: f64| x * x * (-x).exp();
        let upper = 60.0;
        let z = gl20_integral(dens, 0.5, 5.0) + gl20_integral(dens, 5.0, upper);
        let m1 = (gl20_integral(|x| x * dens(x), 0.5, 5.0) + gl20_integral(|x| x * dens(x), 5.0, upper)) / z;
        let m2 = (gl20_integral(|x| x * x * dens(x), 0.5, 5.0) + gl20_integral(|x| x * x * dens(x), 5.0, upper)) / z;
        let se = ((m2 - m1 * m1) / n as f64).sqrt();
        let mean = xs.iter().sum::<f64>() / n as f64;
        assert!((mean - m1).abs() < 4.0 * se, "{mean} vs {m1}");
    }

    #[test]
    fn forced_small_u_accepts() {
        let p = post(10.0, 0.5);
        let env = approx_tune(&p, WMode::Exact);
        let s = KappaSampler::new(&p, &env, Method::Plain);
        let mut st = SampleStats::default();
        for &k in &[1e-6, 0.1, 1.0, 3.0, 10.0] {
            assert!(s.decide_plain(k, f64::MIN_POSITIVE, &mut st));
        }
    }

    #[test]
    fn proposal_at_mode_accepted_for_every_u() {
        let p = post(10.0, 0.5);
        let env = approx_tune(&p, WMode::Exact);
        let s = KappaSampler::new(&p, &env, Method::Plain);
        let sq = KappaSampler::new(&p, &env, Method::Squeezed);
        let mut st = SampleStats::default();
        for &u in &[0.5, 0.9, 0.999_999] {
            assert!(s.decide_plain(env.kappa0, u, &mut st));
            assert!(sq.decide_squeezed(env.kappa0, u, &mut st));
        }
    }

    #[test]
    fn bracketed_squeeze_matches_direct_evaluation() {
        let mut rng = RngStream::new(8);
        for &(eta, b0) in &[(1.0, -0.9), (10.0, -0.5), (10.0, 0.0), (100.0, -0.99), (3.0, 2.0)] {
            let p = post(eta, b0);
            let env = approx_tune(&p, WMode::Winitzki);
            let s = KappaSampler::new(&p, &env, Method::Squeezed);
            let (mut fast, mut direct) = (SampleStats::default(), SampleStats::default());
            for _ in 0..50_000 {
                let kappa = 4.0 * env.kappa0.max(0.1) * rng.uniform();
                let u = rng.uniform();
                let v = s.v(kappa, u).0;
                assert_eq!(
                    s.decide_squeezed(kappa, u, &mut fast),
                    s.squeezed_exact(kappa, v, &mut direct)
                );
            }
            assert_eq!(fast, direct);
        }
    }

    #[test]
    fn squeeze_rejects_without_bessel() {
        let p = post(10.0, 0.5);
        let env = approx_tune(&p, WMode::Exact);
        let s = KappaSampler::new(&p, &env, Method::Squeezed);
        // far right tail: v ≥ c6 for any u near 1
        let kappa = 40.0;
        let u = 0.999;
        let c6 = lower_squeeze(kappa);
        assert!(s.v(kappa, u).0 >= c6);
        let mut st = SampleStats::default();
        assert!(!s.decide_squeezed(kappa, u, &mut st));
        assert_eq!(st.bessel_evals, 0);
        assert_eq!(st.squeeze_rejects, 1);
    }

    #[test]
    fn upper_squeeze_holds_below_gate() {
        let mut k = 1e-6;
        while k < 0.3 {
            let bound = k - 0.5 * (std::f64::consts::TAU * k).ln() + (0.5 / k).ln_1p();
            assert!(log_bessel_i0(k) < bound);
            k *= 1.01;
        }
    }

    #[test]
    fn plain_and_squeezed_agree_bitwise() {
        let p = post(10.0, 0.5);
        for mode in WMode::ALL {
            let env = approx_tune(&p, mode);
            let mut a = RngStream::new(2024);
            let mut b = RngStream::new(2024);
            let (mut sa, mut sb) = (SampleStats::default(), SampleStats::default());
            let pl = KappaSampler::new(&p, &env, Method::Plain);
            let sq = KappaSampler::new(&p, &env, Method::Squeezed);
            for _ in 0..20_000 {
                let x = pl.sample(&mut a, &mut sa).unwrap();
                let y = sq.sample(&mut b, &mut sb).unwrap();
                assert_eq!(x.to_bits(), y.to_bits());
            }
            assert_eq!(sa.proposals, sb.proposals);
            assert!(sb.bessel_evals < sa.bessel_evals);
            assert!(sa.is_conserved() && sb.is_conserved());
        }
    }

    #[test]
    fn acceptance_rate_matches_expected() {
        let p = post(10.0, 0.5);
        let env = approx_tune(&p, WMode::Winitzki);
        let expected = expected_acceptance(&p, &env).unwrap();
        let mut rng = RngStream::new(77);
        let s = KappaSampler::new(&p, &env, Method::Squeezed);
        let mut st = SampleStats::default();
        for _ in 0..100_000 {
            s.sample(&mut rng, &mut st).unwrap();
        }
        let sigma = (expected * (1.0 - expected) / st.proposals as f64).sqrt();
        assert!((st.acceptance_rate() - expected).abs() < 3.0 * sigma);
    }

    #[test]
    fn squeeze_bessel_fraction_at_eta_10() {
        let mut rng = RngStream::new(5);
        let mut beta_rng = rng.split(1);
        let mut st = SampleStats::default();
        for _ in 0..1000 {
            let b0 = 2.0 * beta_rng.uniform() - 1.0;
            let p = post(10.0, b0);
            let env = approx_tune(&p, WMode::Winitzki);
            let s = KappaSampler::new(&p, &env, Method::Squeezed);
            for _ in 0..100 {
                s.sample(&mut rng, &mut st).unwrap();
            }
        }
        assert!(st.is_conserved());
        assert!(
            st.bessel_fraction() <= SQUEEZED_BESSEL_FRACTION_MAX,
            "{}",
            st.bessel_fraction()
        );
    }

    // Measured 0.893 at η = 10, β0 ~ U(−1, 1). Small κ (β0 > 0) almost
    // always needs the Bessel value; β0 near −1 almost never does.
    const SQUEEZED_BESSEL_FRACTION_MAX: f64 = 0.92;

    #[test]
    fn iteration_cap_fires_on_broken_envelope() {
        let p = post(1.0, 0.0);
        let mut env = approx_tune(&p, WMode::Exact);
        env.log_i0_kappa0 -= 50.0; // envelope now sits far below the target
        let s = KappaSampler::new(&p, &env, Method::Plain).with_iteration_cap(1000);
        let mut st = SampleStats::default();
        match s.sample(&mut RngStream::new(1), &mut st) {
            Err(Error::IterationCap { cap, stats }) => {
                assert_eq!(cap, 1000);
                assert_eq!(stats.proposals, 1000);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn batch_of_one_matches_single_draw() {
        let p = post(3.0, 0.2);
        let env = approx_tune(&p, WMode::Winitzki);
        let (single, _) = sample_kappa_squeezed(&p, &env, &mut RngStream::new(9)).unwrap();
        let (batch, stats) = sample_batch(&p, 1, Method::Squeezed, WMode::Winitzki, &mut RngStream::new(9)).unwrap();
        assert_eq!(batch, vec![single]);
        assert_eq!(stats.accepted, 1);
        assert!(sample_batch(&p, 0, Method::Plain, WMode::Exact, &mut RngStream::new(9)).is_err());
    }

    #[test]
    fn larger_beta0_shifts_toward_zero() {
        let mut rng = RngStream::new(31);
        let means: Vec<f64> = [0.0, 1.0, 5.0]
            .iter()
            .map(|&b0| {
                let (xs, _) =
                    sample_batch(&post(10.0, b0), 20_000, Method::Squeezed, WMode::Winitzki, &mut rng).unwrap();
                xs.iter().sum::<f64>() / xs.len() as f64
            })
            .collect();
        assert!(means[0] > means[1] && means[1] > means[2], "{means:?}");
    }

    #[test]
    fn substreams_are_uncorrelated() {
        let p = post(5.0, 0.0);
        let root = RngStream::new(100);
        let n = 100_000;
        let (a, _) = sample_batch(&p, n, Method::Squeezed, WMode::Winitzki, &mut root.split(0)).unwrap();
        let (b, _) = sample_batch(&p, n, Method::Squeezed, WMode::Winitzki, &mut root.split(1)).unwrap();
        let ma = a.iter().sum::<f64>() / n as f64;
        let mb = b.iter().sum::<f64>() / n as f64;
        let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
        for (x, y) in a.iter().zip(&b) {
            sab += (x - ma) * (y - mb);
            saa += (x - ma) * (x - ma);
            sbb += (y - mb) * (y - mb);
        }
        let rho = sab / (saa * sbb).sqrt();
        assert!(rho.abs() < 0.01, "rho = {rho}");
    }

    #[test]
    fn method_parses() {
        assert_eq!("plain".parse::<Method>().unwrap(), Method::Plain);
        assert_eq!(Method::Squeezed.to_string(), "squeezed");
        assert!("fast".parse::<Method>().is_err());
    }
}
