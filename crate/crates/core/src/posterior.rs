//! The von Mises layer: density, angle sampling, and Gibbs inference for
//! `(μ, κ)` under the conjugate prior `π(κ) ∝ I0(κ)^(−a) exp(−bκ)`.
//!
//! Given μ, the concentration posterior is Bessel exponential with
//! `η = a + n` and `β0 = (b − Σcos(θᵢ − μ)) / (a + n)`. Given κ, the mean
//! direction posterior is itself von Mises.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::sampler::{KappaSampler, Method, SampleStats};
use crate::special::log_bessel_i0;
use crate::tuning::{approx_tune, PosteriorParams, WMode};

/// Wraps an angle into `[−π, π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let w = (theta + PI).rem_euclid(TAU) - PI;
    // rem_euclid can round up to exactly 2π
    if w >= PI {
        -PI
    } else {
        w
    }
}

/// Mean direction and concentration of a von Mises distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VonMisesParams {
    mu: f64,
    kappa: f64,
}

impl VonMisesParams {
    /// Wraps `mu` into `[−π, π)`; requires finite `mu` and finite `kappa ≥ 0`.
    pub fn new(mu: f64, kappa: f64) -> Result<Self> {
        if !mu.is_finite() || !(kappa >= 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "von Mises parameters need finite mu and kappa >= 0 (mu = {mu}, kappa = {kappa})"
            )));
        }
        Ok(Self {
            mu: wrap_angle(mu),
            kappa,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }
}

/// `κ cos(θ − μ) − log(2π) − log I0(κ)`.
pub fn von_mises_log_density(theta: f64, params: &VonMisesParams) -> f64 {
    params.kappa * (theta - params.mu).cos() - TAU.ln() - log_bessel_i0(params.kappa)
}

/// One exact von Mises draw (Best–Fisher, wrapped Cauchy envelope), in `[−π, π)`.
pub fn sample_von_mises(params: &VonMisesParams, rng: &mut RngStream) -> f64 {
    let kappa = params.kappa;
    if kappa == 0.0 {
        return wrap_angle(PI * (2.0 * rng.uniform() - 1.0));
    }
    let s = (1.0 + 4.0 * kappa * kappa).sqrt();
    let tau = 1.0 + s;
    // τ − 2 and τ − √(2τ) rewritten to avoid cancellation at small κ
    let tau_m2 = 4.0 * kappa * kappa / (s + 1.0);
    let rho = tau * tau_m2 / (tau + (2.0 * tau).sqrt()) / (2.0 * kappa);
    let r = (1.0 + rho * rho) / (2.0 * rho);
    let f = loop {
        let z = (PI * rng.uniform()).cos();
        let f = (1.0 + r * z) / (r + z);
        let c = kappa * (r - f);
        let u2 = rng.uniform();
        if c * (2.0 - c) - u2 > 0.0 || (c / u2).ln() + 1.0 - c >= 0.0 {
            break f;
        }
    };
    let half = f.clamp(-1.0, 1.0).acos();
    let theta = if rng.uniform() > 0.5 {
        params.mu + half
    } else {
        params.mu - half
    };
    wrap_angle(theta)
}

/// Conjugate prior: `π(κ) ∝ I0(κ)^(−a) exp(−bκ)` for the concentration and,
/// for the mean direction, `π(μ | κ) ∝ exp(κ R0 cos(μ − μ0))`.
///
/// `R0 = 0` (the default) leaves μ with a flat prior.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ConjugatePrior {
    pub a: f64,
    pub b: f64,
    pub mu0: f64,
    pub r0: f64,
}

impl ConjugatePrior {
    pub fn validate(&self) -> Result<()> {
        let finite = self.a.is_finite() && self.b.is_finite() && self.mu0.is_finite();
        if !finite || !(self.a >= 0.0) || !(self.r0 >= 0.0 && self.r0.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "prior needs finite a >= 0, b, mu0 and R0 >= 0 (got {self:?})"
            )));
        }
        Ok(())
    }
}

/// Sufficient statistics `(n, Σcos θ, Σsin θ)` of a set of angles.
#[derive(Debug, Clone, Copy, PartialEq)]
struct AngleSums {
    n: usize,
    c: f64,
    s: f64,
}

impl AngleSums {
    fn new(angles: &[f64]) -> Self {
        let (c, s) = angles.iter().fold((0.0, 0.0), |(c, s), &t| (c + t.cos(), s + t.sin()));
        Self { n: angles.len(), c, s }
    }

    /// `Σcos(θᵢ − μ)`.
    fn cos_sum(&self, mu: f64) -> f64 {
        self.c * mu.cos() + self.s * mu.sin()
    }
}

fn hyperparams(sums: &AngleSums, cos_sum: f64, b: f64, a: f64) -> Result<PosteriorParams> {
    let eta = a + sums.n as f64;
    if !(eta > 0.0) {
        return Err(Error::InvalidPosterior(format!(
            "a + n must be positive (a = {a}, n = {})",
            sums.n
        )));
    }
    let beta0 = (b - cos_sum) / eta;
    if !(beta0 > -1.0) {
        return Err(Error::InvalidPosterior(format!(
            "beta0 = {beta0} <= -1: the data are too concentrated for this prior"
        )));
    }
    PosteriorParams::new(eta, beta0)
}

/// Posterior of κ given μ: `η = a + n`, `β0 = (b − Σcos(θᵢ − μ)) / (a + n)`.
///
/// Uses the prior's `a` and `b` only.
pub fn posterior_hyperparams(angles: &[f64], mu: f64, prior: &ConjugatePrior) -> Result<PosteriorParams> {
    let cos_sum: f64 = angles.iter().map(|&t| (t - mu).cos()).sum();
    hyperparams(&AngleSums::new(angles), cos_sum, prior.b, prior.a)
}

/// Gibbs sampler settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GibbsConfig {
    /// Total iterations including burn-in.
    pub iters: usize,
    pub burn_in: usize,
    /// Starting concentration; the first μ step conditions on it.
    pub init_kappa: f64,
    pub method: Method,
    pub w_mode: WMode,
}

impl Default for GibbsConfig {
    fn default() -> Self {
        Self {
            iters: 2000,
            burn_in: 500,
            init_kappa: 1.0,
            method: Method::Squeezed,
            w_mode: WMode::Winitzki,
        }
    }
}

/// Post-burn-in `(μ, κ)` draws.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GibbsChain {
    pub draws: Vec<(f64, f64)>,
    pub burn_in: usize,
    pub seed: u64,
    pub stats: SampleStats,
}

impl GibbsChain {
    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    pub fn kappas(&self) -> Vec<f64> {
        self.draws.iter().map(|d| d.1).collect()
    }

    /// Circular mean of the μ draws.
    pub fn mu_mean(&self) -> f64 {
        let (c, s) = self
            .draws
            .iter()
            .fold((0.0, 0.0), |(c, s), d| (c + d.0.cos(), s + d.0.sin()));
        s.atan2(c)
    }

    /// Root mean square of the wrapped deviations from [`Self::mu_mean`].
    pub fn mu_sd(&self) -> f64 {
        let m = self.mu_mean();
        let ss: f64 = self.draws.iter().map(|d| wrap_angle(d.0 - m).powi(2)).sum();
        (ss / self.draws.len() as f64).sqrt()
    }

    pub fn kappa_mean(&self) -> f64 {
        self.draws.iter().map(|d| d.1).sum::<f64>() / self.draws.len() as f64
    }

    pub fn kappa_sd(&self) -> f64 {
        let m = self.kappa_mean();
        let ss: f64 = self.draws.iter().map(|d| (d.1 - m).powi(2)).sum();
        (ss / (self.draws.len() as f64 - 1.0)).sqrt()
    }

    /// Standard error of [`Self::kappa_mean`] from 20 batch means, which
    /// accounts for autocorrelation in the chain.
    pub fn kappa_mean_se(&self) -> f64 {
        batch_means_se(&self.kappas(), 20)
    }

    /// Empirical quantile of the κ draws (nearest rank).
    pub fn kappa_quantile(&self, p: f64) -> f64 {
        let mut k = self.kappas();
        k.sort_by(f64::total_cmp);
        let idx = ((p * k.len() as f64).ceil() as usize).clamp(1, k.len()) - 1;
        k[idx]
    }
}

fn batch_means_se(values: &[f64], batches: usize) -> f64 {
    let size = values.len() / batches;
    if size == 0 {
        return f64::NAN;
    }
    let means: Vec<f64> = values
        .chunks_exact(size)
        .take(batches)
        .map(|c| c.iter().sum::<f64>() / size as f64)
        .collect();
    let m = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (batches as f64 - 1.0);
    (var / batches as f64).sqrt()
}

/// Alternates `μ | κ` and `κ | μ`, keeping the draws after burn-in.
///
/// The μ step draws from `VonMises(atan2(S, C), κ√(S² + C²))` with
/// `C = R0 cos μ0 + Σcos θᵢ` and `S = R0 sin μ0 + Σsin θᵢ`. The κ step uses
/// `b − R0 cos(μ − μ0)` in place of `b`, retunes, and runs the rejection loop.
pub fn gibbs_sample(
    angles: &[f64],
    prior: &ConjugatePrior,
    config: &GibbsConfig,
    rng: &mut RngStream,
) -> Result<GibbsChain> {
    prior.validate()?;
    if config.iters <= config.burn_in {
        return Err(Error::InvalidArgument(format!(
            "iters ({}) must exceed burn-in ({})",
            config.iters, config.burn_in
        )));
    }
    if !(config.init_kappa >= 0.0 && config.init_kappa.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "initial kappa must be finite and >= 0, got {}",
            config.init_kappa
        )));
    }
    if !(prior.a + angles.len() as f64 > 0.0) {
        return Err(Error::InvalidPosterior(
            "a + n must be positive: supply data or a > 0".into(),
        ));
    }
    let sums = AngleSums::new(angles);
    let c = prior.r0 * prior.mu0.cos() + sums.c;
    let s = prior.r0 * prior.mu0.sin() + sums.s;
    let mu_center = s.atan2(c);
    let resultant = c.hypot(s);

    let mut kappa = config.init_kappa;
    let mut stats = SampleStats::default();
    let mut draws = Vec::with_capacity(config.iters - config.burn_in);
    for it in 0..config.iters {
        let mu = sample_von_mises(&VonMisesParams::new(mu_center, kappa * resultant)?, rng);
        let b = prior.b - prior.r0 * (mu - prior.mu0).cos();
        let post = hyperparams(&sums, sums.cos_sum(mu), b, prior.a)?;
        let env = approx_tune(&post, config.w_mode);
        kappa = KappaSampler::new(&post, &env, config.method).sample(rng, &mut stats)?;
        if it >= config.burn_in {
            draws.push((mu, kappa));
        }
    }
    Ok(GibbsChain {
        draws,
        burn_in: config.burn_in,
        seed: rng.seed(),
        stats,
    })
}

/// Parses angles, one per line. Blank lines and lines starting with `#` are
/// skipped. With `degrees`, values are multiplied by π/180. Results are
/// wrapped into `[−π, π)`.
pub fn read_angles(text: &str, degrees: bool) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let x: f64 = t
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("line {}: cannot parse angle '{t}'", i + 1)))?;
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!("line {}: angle must be finite", i + 1)));
        }
        out.push(wrap_angle(if degrees { x * (PI / 180.0) } else { x }));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;
    use crate::special::bessel_ratio;
    use crate::validation::ks::{ks_one_sample, ks_two_sample};

    fn vm(mu: f64, kappa: f64) -> VonMisesParams {
        VonMisesParams::new(mu, kappa).unwrap()
    }

    fn vm_data(mu: f64, kappa: f64, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = RngStream::new(seed);
        (0..n).map(|_| sample_von_mises(&vm(mu, kappa), &mut rng)).collect()
    }

    #[test]
    fn wrapping() {
        assert_eq!(wrap_angle(PI), -PI);
        assert_eq!(wrap_angle(-PI), -PI);
        assert!((wrap_angle(3.0 * PI + 0.5) - (-PI + 0.5)).abs() < 1e-12);
        assert!((wrap_angle(-0.25) + 0.25).abs() < 1e-15);
        assert!((vm(7.0, 1.0).mu() - (7.0 - TAU)).abs() < 1e-12);
        assert!(VonMisesParams::new(0.0, -1.0).is_err());
        assert!(VonMisesParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn density_values() {
        assert_eq!(von_mises_log_density(1.3, &vm(0.2, 0.0)), -TAU.ln());
        let want = 1.0 - TAU.ln() - 1.266_065_877_752_008_4f64.ln();
        assert!((von_mises_log_density(0.4, &vm(0.4, 1.0)) - want).abs() < 1e-14);
    }

    #[test]
    fn density_normalized() {
        for &k in &[0.5, 5.0, 50.0] {
            let p = vm(0.3, k);
            let r = integrate(
                |t| von_mises_log_density(t, &p).exp(),
                -PI,
                PI,
                &[0.3],
                1e-13,
                1e-13,
                200,
            );
            assert!((r.value - 1.0).abs() < 1e-9, "kappa {k}: {}", r.value);
        }
    }

    #[test]
    fn zero_concentration_is_uniform() {
        let xs = vm_data(0.0, 0.0, 100_000, 1);
        let r = ks_one_sample(&xs, |t| (t + PI) / TAU);
        assert!(r.p_value > 0.01);
    }

    #[test]
    fn resultant_matches_bessel_ratio() {
        let n = 100_000;
        let xs = vm_data(0.0, 2.0, n, 2);
        let c = xs.iter().map(|t| t.cos()).sum::<f64>() / n as f64;
        let s = xs.iter().map(|t| t.sin()).sum::<f64>() / n as f64;
        let r2 = bessel_ratio(2.0);
        // Var(cos θ) = 1 − r/κ − r², Var(sin θ) = r/κ
        let se_c = ((1.0 - r2 / 2.0 - r2 * r2) / n as f64).sqrt();
        let se_s = ((r2 / 2.0) / n as f64).sqrt();
        assert!((c - r2).abs() < 4.0 * se_c, "{c} vs {r2}");
        assert!(s.abs() < 4.0 * se_s);
        // mean direction, delta method: SE ≈ se_s / r
        assert!(s.atan2(c).abs() < 4.0 * se_s / r2);
    }

    #[test]
    fn location_family() {
        let a = vm_data(0.0, 3.0, 50_000, 3);
        let b: Vec<f64> = vm_data(1.0, 3.0, 50_000, 4)
            .iter()
            .map(|t| wrap_angle(t - 1.0))
            .collect();
        assert!(ks_two_sample(&a, &b).p_value > 0.01);
    }

    #[test]
    fn draws_match_quadrature_cdf() {
        for &k in &[0.01, 0.7, 30.0] {
            let p = vm(0.0, k);
            let xs = vm_data(0.0, k, 50_000, 5);
            let cdf = |t: f64| integrate(|s| von_mises_log_density(s, &p).exp(), -PI, t, &[], 1e-12, 1e-12, 200).value;
            // tabulate then interpolate linearly on a fine grid
            let grid: Vec<f64> = (0..=2000).map(|i| -PI + TAU * i as f64 / 2000.0).collect();
            let mut table = vec![0.0];
            for w in grid.windows(2) {
                let last = *table.last().unwrap();
                table.push(last + (cdf(w[1]) - cdf(w[0])));
            }
            let lookup = |t: f64| {
                let x = (t + PI) / TAU * 2000.0;
                let i = (x.floor() as usize).min(1999);
                table[i] + (x - i as f64) * (table[i + 1] - table[i])
            };
            let r = ks_one_sample(&xs, lookup);
            assert!(r.p_value > 0.01, "kappa {k}: p = {}", r.p_value);
        }
    }

    #[test]
    fn draws_wrapped() {
        assert!(vm_data(3.1, 0.5, 10_000, 6).iter().all(|&t| (-PI..PI).contains(&t)));
    }

    #[test]
    fn hyperparams_examples() {
        let prior = ConjugatePrior {
            a: 2.0,
            b: 1.0,
            ..Default::default()
        };
        let p = posterior_hyperparams(&[], 0.3, &prior).unwrap();
        assert_eq!((p.eta(), p.beta0()), (2.0, 0.5));

        let same = vec![0.4; 10];
        assert!(matches!(
            posterior_hyperparams(&same, 0.4, &ConjugatePrior::default()),
            Err(Error::InvalidPosterior(_))
        ));

        let quarter = [0.0, PI / 2.0, PI, 3.0 * PI / 2.0];
        let prior = ConjugatePrior {
            a: 1.0,
            b: 0.5,
            ..Default::default()
        };
        let p = posterior_hyperparams(&quarter, 0.0, &prior).unwrap();
        assert_eq!(p.eta(), 5.0);
        assert!((p.beta0() - 0.1).abs() < 1e-15);

        assert!(posterior_hyperparams(&[], 0.0, &ConjugatePrior::default()).is_err());
    }

    #[test]
    fn hyperparams_permutation_invariant() {
        let mut xs = vm_data(0.5, 2.0, 101, 7);
        let prior = ConjugatePrior {
            a: 1.0,
            b: 0.2,
            ..Default::default()
        };
        let p1 = posterior_hyperparams(&xs, 0.4, &prior).unwrap();
        xs.reverse();
        xs.rotate_left(17);
        let p2 = posterior_hyperparams(&xs, 0.4, &prior).unwrap();
        assert!((p1.beta0() - p2.beta0()).abs() < 1e-13);
        assert_eq!(p1.eta(), p2.eta());
    }

    /// The mapped (η, β0) must reproduce prior × likelihood up to a constant
    /// in κ. The alternative reading β0 = b/(a+n) − Σcos/n does not.
    #[test]
    fn hyperparams_match_conjugate_update() {
        let xs = vm_data(0.2, 1.5, 40, 8);
        let (a, b, mu) = (3.0, 0.7, 0.1);
        let prior = ConjugatePrior {
            a,
            b,
            ..Default::default()
        };
        let p = posterior_hyperparams(&xs, mu, &prior).unwrap();
        let cos_sum: f64 = xs.iter().map(|t| (t - mu).cos()).sum();
        let direct = |k: f64| -(a + xs.len() as f64) * log_bessel_i0(k) - b * k + k * cos_sum;
        let n = xs.len() as f64;
        let alt_beta0 = b / (a + n) - cos_sum / n;
        let alt = |k: f64| -p.eta() * log_bessel_i0(k) - p.eta() * alt_beta0 * k;
        let offsets: Vec<f64> = [0.1, 1.0, 4.0]
            .iter()
            .map(|&k| p.log_density_unnormalized(k) - direct(k))
            .collect();
        assert!((offsets[0] - offsets[1]).abs() < 1e-10 && (offsets[1] - offsets[2]).abs() < 1e-10);
        let alt_offsets: Vec<f64> = [0.1, 4.0].iter().map(|&k| alt(k) - direct(k)).collect();
        assert!((alt_offsets[0] - alt_offsets[1]).abs() > 1e-2);
    }

    #[test]
    fn read_angles_formats() {
        let xs = read_angles("# header\n0.5\n\n  -1.0 \n", false).unwrap();
        assert_eq!(xs, vec![0.5, -1.0]);
        let d = read_angles("90\n180\n", true).unwrap();
        assert!((d[0] - PI / 2.0).abs() < 1e-15);
        assert_eq!(d[1], -PI);
        assert!(read_angles("1.0\nabc\n", false).is_err());
        assert!(read_angles("inf\n", false).is_err());
    }

    fn config(iters: usize, burn_in: usize, init_kappa: f64) -> GibbsConfig {
        GibbsConfig {
            iters,
            burn_in,
            init_kappa,
            ..Default::default()
        }
    }

    #[test]
    fn gibbs_recovers_truth() {
        let data = vm_data(0.7, 4.0, 200, 9);
        let chain = gibbs_sample(
            &data,
            &ConjugatePrior::default(),
            &config(6000, 1000, 1.0),
            &mut RngStream::new(10),
        )
        .unwrap();
        assert_eq!(chain.len(), 5000);
        assert!(wrap_angle(chain.mu_mean() - 0.7).abs() < 3.0 * chain.mu_sd());
        assert!(chain.kappa_quantile(0.005) < 4.0 && 4.0 < chain.kappa_quantile(0.995));
        assert!(chain.draws.iter().all(|&(m, k)| (-PI..PI).contains(&m) && k >= 0.0));
        assert!(chain.stats.is_conserved());
    }

    #[test]
    fn gibbs_kappa_near_mle_for_large_n() {
        let data = vm_data(0.3, 2.0, 5000, 11);
        let n = data.len() as f64;
        let rbar = data
            .iter()
            .map(|t| t.cos())
            .sum::<f64>()
            .hypot(data.iter().map(|t| t.sin()).sum::<f64>())
            / n;
        // classical estimator: solve r(κ) = R̄ by bisection
        let (mut lo, mut hi) = (1e-6, 100.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if bessel_ratio(mid) < rbar {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mle = 0.5 * (lo + hi);
        let chain = gibbs_sample(
            &data,
            &ConjugatePrior::default(),
            &config(4000, 500, 1.0),
            &mut RngStream::new(12),
        )
        .unwrap();
        let tol = 0.25 * chain.kappa_sd() + 3.0 * chain.kappa_mean_se();
        assert!(
            (chain.kappa_mean() - mle).abs() < tol,
            "{} vs {mle}",
            chain.kappa_mean()
        );
    }

    #[test]
    fn gibbs_forgets_initial_kappa() {
        let data = vm_data(0.7, 4.0, 200, 13);
        let run = |k0, seed| {
            gibbs_sample(
                &data,
                &ConjugatePrior::default(),
                &config(5000, 1000, k0),
                &mut RngStream::new(seed),
            )
            .unwrap()
        };
        let (a, b) = (run(0.01, 14), run(100.0, 15));
        let se = a.kappa_mean_se().hypot(b.kappa_mean_se());
        assert!((a.kappa_mean() - b.kappa_mean()).abs() < 3.0 * se);
    }

    #[test]
    fn gibbs_bookkeeping_and_errors() {
        let data = vm_data(0.0, 1.0, 20, 16);
        let prior = ConjugatePrior::default();
        let c = gibbs_sample(&data, &prior, &config(11, 10, 1.0), &mut RngStream::new(1)).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.burn_in, 10);
        assert!(gibbs_sample(&data, &prior, &config(10, 10, 1.0), &mut RngStream::new(1)).is_err());
        assert!(gibbs_sample(&data, &prior, &config(10, 0, -1.0), &mut RngStream::new(1)).is_err());
        assert!(gibbs_sample(&[], &prior, &config(10, 0, 1.0), &mut RngStream::new(1)).is_err());
        let bad = ConjugatePrior {
            a: -1.0,
            ..Default::default()
        };
        assert!(gibbs_sample(&data, &bad, &config(10, 0, 1.0), &mut RngStream::new(1)).is_err());
    }

    #[test]
    fn gibbs_prior_only_with_mean_prior() {
        // no data: μ | κ ~ VM(μ0, κR0), κ | μ Bessel exponential with b − R0 cos(μ − μ0)
        let prior = ConjugatePrior {
            a: 5.0,
            b: 2.0,
            mu0: 1.0,
            r0: 3.0,
        };
        let chain = gibbs_sample(&[], &prior, &config(3000, 200, 1.0), &mut RngStream::new(17)).unwrap();
        assert!(wrap_angle(chain.mu_mean() - 1.0).abs() < 0.2);
    }
}
