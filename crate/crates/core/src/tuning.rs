//! Proposal tuning for the gamma-envelope rejection sampler.
//!
//! The proposal draws `x ~ Gamma(shape = ηα + 1, rate = ηβ)` and sets
//! `κ = x − ε`. A proposal is accepted with probability
//! `exp{η (g(κ) − g*)}` where
//!
//! ```text
//! g(κ) = (β − β0) κ − α log(κ + ε) − log I0(κ)
//! ```
//!
//! and `g*` is the supremum of `g` on `κ ≥ 0`. This module computes the
//! tuning `(α, β, ε, κ0)` two ways: [`approx_tune`] is the closed form used in
//! production, and [`oracle_tune`] numerically maximizes the expected
//! acceptance. [`expected_acceptance`] evaluates the acceptance probability of
//! any envelope by quadrature.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature;
use crate::special::{self, bessel_ratio, ln_gamma, log_bessel_i0, psi, BesselEval};

/// Parameters `(η, β0)` of one Bessel exponential distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PosteriorParams {
    eta: f64,
    beta0: f64,
}

impl PosteriorParams {
    /// Requires `η > 0` and `β0 > −1`, both finite.
    pub fn new(eta: f64, beta0: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite() && beta0 > -1.0 && beta0.is_finite()) {
            return Err(Error::InvalidParams { eta, beta0 });
        }
        Ok(Self { eta, beta0 })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn beta0(&self) -> f64 {
        self.beta0
    }

    /// Unnormalized log density `−η β0 κ − η log I0(κ)`.
    pub fn log_density_unnormalized(&self, kappa: f64) -> f64 {
        -self.eta * (self.beta0 * kappa + log_bessel_i0(kappa))
    }
}

/// How `W0` is evaluated while tuning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WMode {
    /// Halley-refined principal branch.
    Exact,
    /// Winitzki's closed-form approximation.
    #[default]
    Winitzki,
}

impl WMode {
    pub const ALL: [WMode; 2] = [WMode::Exact, WMode::Winitzki];

    fn w0(self, t: f64) -> f64 {
        // t = c3·exp(c3) is never below −1/e beyond rounding, so the
        // checked entry points cannot fail here.
        match self {
            WMode::Exact => special::lambert_w0(t).unwrap_or(-1.0),
            WMode::Winitzki => special::lambert_w0_winitzki(t).unwrap_or(-1.0),
        }
    }
}

impl fmt::Display for WMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WMode::Exact => "exact",
            WMode::Winitzki => "winitzki",
        })
    }
}

impl FromStr for WMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(WMode::Exact),
            "winitzki" => Ok(WMode::Winitzki),
            other => Err(Error::InvalidArgument(format!(
                "unknown Lambert W mode '{other}' (expected exact|winitzki)"
            ))),
        }
    }
}

/// A tuned shifted-gamma envelope plus cached values of `g`.
///
/// `log_epsilon` is carried separately because for large `β0` the shift
/// underflows (`ε < 1e-308`) while `log ε`, and with it `g(0)`, stays finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Envelope {
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub log_epsilon: f64,
    pub kappa0: f64,
    pub log_i0_kappa0: f64,
    pub r_kappa0: f64,
    pub g_at_kappa0: f64,
    pub g_at_zero: f64,
}

impl Envelope {
    /// Builds an envelope from raw parameters, filling in the cached values.
    pub fn new(post: &PosteriorParams, kappa0: f64, alpha: f64, beta: f64, epsilon: f64) -> Self {
        let be = BesselEval {
            log_i0: log_bessel_i0(kappa0),
            ratio: bessel_ratio(kappa0),
        };
        Self::assemble(post, kappa0, be, alpha, beta, epsilon, epsilon.ln())
    }

    fn assemble(
        post: &PosteriorParams,
        kappa0: f64,
        be: BesselEval,
        alpha: f64,
        beta: f64,
        epsilon: f64,
        log_epsilon: f64,
    ) -> Self {
        let dbeta = beta - post.beta0;
        Self {
            alpha,
            beta,
            epsilon,
            log_epsilon,
            kappa0,
            log_i0_kappa0: be.log_i0,
            r_kappa0: be.ratio,
            g_at_kappa0: g_raw(dbeta, alpha, epsilon, log_epsilon, kappa0, be.log_i0),
            g_at_zero: g_raw(dbeta, alpha, epsilon, log_epsilon, 0.0, 0.0),
        }
    }

    /// The dominating constant `max(g(κ0), g(0))` used by the accept test.
    ///
    /// With exact `W0` the two agree to rounding; with the Winitzki form
    /// `g(0)` can sit slightly above `g(κ0)`.
    pub fn threshold(&self) -> f64 {
        self.g_at_kappa0.max(self.g_at_zero)
    }

    /// `max(0, g(0) − g(κ0))`, the correction subtracted in the accept test.
    pub fn exactness_guard(&self) -> f64 {
        (self.g_at_zero - self.g_at_kappa0).max(0.0)
    }

    pub fn proposal_shape(&self, post: &PosteriorParams) -> f64 {
        post.eta * self.alpha + 1.0
    }

    pub fn proposal_rate(&self, post: &PosteriorParams) -> f64 {
        post.eta * self.beta
    }
}

#[inline]
pub(crate) fn g_raw(dbeta: f64, alpha: f64, eps: f64, log_eps: f64, kappa: f64, log_i0: f64) -> f64 {
    let shift = if alpha == 0.0 {
        0.0
    } else if kappa == 0.0 {
        alpha * log_eps
    } else {
        alpha * (kappa + eps).ln()
    };
    dbeta * kappa - shift - log_i0
}

/// `g(κ) = (β − β0) κ − α log(κ + ε) − log I0(κ)`.
///
/// At `κ = ε = 0` with `α > 0` this is `+∞`.
pub fn g_value(post: &PosteriorParams, env: &Envelope, kappa: f64) -> f64 {
    g_raw(
        env.beta - post.beta0,
        env.alpha,
        env.epsilon,
        env.log_epsilon,
        kappa,
        log_bessel_i0(kappa),
    )
}

/// Lower and upper bounds `(κ_L, κ_U)` on the positive root of
/// `β0 + r(κ) − 1/(ηκ)`, from the Amos bounds on `r`.
pub fn kappa_bounds(post: &PosteriorParams) -> (f64, f64) {
    let (eta, b0) = (post.eta, post.beta0);
    let lower = 2.0 / (eta * b0 + (2.0 * eta + eta * eta * b0 * b0).sqrt());
    let upper = (2.0 + 1.0 / eta) / ((eta + 1.0) * b0 + (2.0 * eta + 1.0 + eta * eta * b0 * b0).sqrt());
    (lower, upper)
}

/// The `α`, `ε` pair forced by `(κ0, β)`: `α` makes `κ0` stationary for `g`
/// and `ε` (through `W0`) equalizes `g(0)` and `g(κ0)`.
fn envelope_for(post: &PosteriorParams, kappa0: f64, be: BesselEval, beta: f64, w_mode: WMode) -> Envelope {
    let b0 = post.beta0;
    let slope = beta - b0 - be.ratio;
    let c3 = (be.log_i0 / kappa0 - beta + b0) / slope;
    let c4 = w_mode.w0(c3 * c3.exp());
    let epsilon = c4 * kappa0 / (c3 - c4);
    let log_epsilon = if c4 != 0.0 {
        kappa0.ln() + (-c4).ln() - (c4 - c3).ln()
    } else {
        // c3·exp(c3) underflowed; W0(t) ≈ t so ε ≈ κ0·exp(c3)
        kappa0.ln() + c3
    };
    let alpha = slope * (kappa0 + epsilon);
    Envelope::assemble(post, kappa0, be, alpha, beta, epsilon, log_epsilon)
}

/// Closed-form proposal tuning.
///
/// `κ0` is a convex combination of the bounds from [`kappa_bounds`], `β`
/// follows a switching approximation to the optimal rate, and `ε`, `α`
/// follow from `(κ0, β)`.
pub fn approx_tune(post: &PosteriorParams, w_mode: WMode) -> Envelope {
    let (eta, b0) = (post.eta, post.beta0);
    let (kl, ku) = kappa_bounds(post);
    let c1 = 0.5 + (1.0 - 0.5 / eta) / (2.0 * eta);
    let kappa0 = (1.0 - c1) * kl + c1 * ku;
    let be = BesselEval {
        log_i0: log_bessel_i0(kappa0),
        ratio: bessel_ratio(kappa0),
    };
    let c2 = 0.25 / eta - 2.0 / (3.0 * eta.sqrt());
    let beta = if b0 <= c2 {
        b0 + 1.0
    } else {
        let d = b0 - c2;
        b0 + be.ratio + (1.0 - be.ratio) / (1.0 + 40.0 * eta * d * d)
    };
    envelope_for(post, kappa0, be, beta, w_mode)
}

/// `h = (α + 1/η) log(ηβ) − (1/η) log Γ(ηα + 1) − βε − g(κ0)`.
///
/// `log(acceptance) = η·h + log ∫ p`, so maximizing `h` over the tuning
/// parameters maximizes the expected acceptance.
pub fn h_value(post: &PosteriorParams, kappa0: f64, alpha: f64, beta: f64, epsilon: f64) -> Result<f64> {
    let eta = post.eta;
    if !(beta > 0.0) {
        return Err(Error::Domain {
            func: "h_value",
            value: beta,
            expected: "beta > 0",
        });
    }
    let shape = eta * alpha + 1.0;
    let lg = special::log_gamma_fn(shape)?;
    let g0 = g_raw(
        beta - post.beta0,
        alpha,
        epsilon,
        epsilon.ln(),
        kappa0,
        log_bessel_i0(kappa0),
    );
    Ok(h_raw(eta, alpha, beta, epsilon, g0, lg))
}

#[inline]
fn h_raw(eta: f64, alpha: f64, beta: f64, epsilon: f64, g_kappa0: f64, lgamma: f64) -> f64 {
    (alpha + 1.0 / eta) * (eta * beta).ln() - lgamma / eta - beta * epsilon - g_kappa0
}

fn h_of(post: &PosteriorParams, env: &Envelope) -> f64 {
    let shape = post.eta * env.alpha + 1.0;
    h_raw(
        post.eta,
        env.alpha,
        env.beta,
        env.epsilon,
        env.g_at_kappa0,
        ln_gamma(shape),
    )
}

/// `∂L/∂β` of the constrained Lagrangian, with `α`, `ε`, `λ1`, `λ2` eliminated
/// through their stationarity conditions. Non-finite values (ε underflow just
/// above the lower end of the admissible interval) come back as `+∞`.
fn lagrangian_dbeta(post: &PosteriorParams, env: &Envelope) -> f64 {
    let eta = post.eta;
    let (a, b, e, k0) = (env.alpha, env.beta, env.epsilon, env.kappa0);
    let ke = k0 + e;
    let lambda2 = (psi(eta * a + 1.0) - (eta * b * ke).ln() - 1.0 + b * ke / a) / ((k0 / e).ln_1p() - k0 / e);
    let lambda1 = ke / (a * e) * (b * e * e + (k0 * b - a) * e + a * lambda2 * k0);
    let v = (a + 1.0 / eta) / b - ke + lambda1 - lambda2 * k0;
    if v.is_finite() {
        v
    } else {
        f64::INFINITY
    }
}

/// Optimal `β` for a fixed `κ0`: the root of `∂L/∂β` inside the admissible
/// interval, or the boundary `β0 + 1` when `∂L/∂β` is still positive there.
fn optimal_beta_envelope(post: &PosteriorParams, kappa0: f64) -> Result<Envelope> {
    let b0 = post.beta0;
    let be = BesselEval {
        log_i0: log_bessel_i0(kappa0),
        ratio: bessel_ratio(kappa0),
    };
    let upper = b0 + 1.0;
    let mut lo = (b0 + be.ratio).max(0.0) + 1e-9;
    let mut hi = upper;
    let at_upper = envelope_for(post, kappa0, be, upper, WMode::Exact);
    if lo >= hi || lagrangian_dbeta(post, &at_upper) > 0.0 {
        return Ok(at_upper);
    }
    let at_lower = envelope_for(post, kappa0, be, lo, WMode::Exact);
    if lagrangian_dbeta(post, &at_lower) <= 0.0 {
        return Err(Error::Numeric {
            context: "oracle_tune: no sign change of dL/dbeta",
            eta: post.eta,
            beta0: b0,
            kappa0,
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if lagrangian_dbeta(post, &envelope_for(post, kappa0, be, mid, WMode::Exact)) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(envelope_for(post, kappa0, be, 0.5 * (lo + hi), WMode::Exact))
}

/// Numerically optimal tuning.
///
/// For each candidate `κ0` the optimal `β` solves `∂L/∂β = 0` by bisection;
/// the outer golden-section search maximizes [`h_value`] over
/// `κ0 ∈ [κ_L/4, 4κ_U]` to relative width `1e-8`, preferring the leftmost
/// point on ties. Always uses exact `W0`.
pub fn oracle_tune(post: &PosteriorParams) -> Result<Envelope> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (kl, ku) = kappa_bounds(post);
    let (mut a, mut b) = (kl.min(ku) / 4.0, 4.0 * kl.max(ku));

    let eval = |k: f64| -> Result<(f64, Envelope)> {
        let env = optimal_beta_envelope(post, k)?;
        Ok((h_of(post, &env), env))
    };

    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut ec) = eval(c)?;
    let (mut fd, mut ed) = eval(d)?;
    let mut best = if fd > fc { (fd, ed) } else { (fc, ec) };
    while b - a > 1e-8 * c.abs() {
        if fc >= fd {
            b = d;
            (d, fd, ed) = (c, fc, ec);
            c = b - INV_PHI * (b - a);
            (fc, ec) = eval(c)?;
            if fc >= best.0 {
                best = (fc, ec);
            }
        } else {
            a = c;
            (c, fc, ec) = (d, fd, ed);
            d = a + INV_PHI * (b - a);
            (fd, ed) = eval(d)?;
            if fd > best.0 {
                best = (fd, ed);
            }
        }
    }
    Ok(best.1)
}

/// `log ∫₀^∞ exp(power·log I0(κ) − rate·κ) dκ` by adaptive quadrature.
///
/// Converges iff `rate > power`. The integrand is scaled by its peak value
/// and truncated where it has fallen by `e^-50` relative to the peak.
pub fn log_bessel_laplace(power: f64, rate: f64) -> Result<f64> {
    let (mode, kmax) = integration_range(power, rate)?;
    let lf = |k: f64| power * log_bessel_i0(k) - rate * k;
    let peak = lf(mode);
    let r = quadrature::integrate(|k| (lf(k) - peak).exp(), 0.0, kmax, &[mode], 0.0, 1e-13, 4000);
    Ok(peak + r.value.ln())
}

/// Peak location and truncation point for `exp(power·log I0(κ) − rate·κ)`.
pub(crate) fn integration_range(power: f64, rate: f64) -> Result<(f64, f64)> {
    if !(rate > power) || !power.is_finite() || !rate.is_finite() {
        return Err(Error::Divergent(format!(
            "exp({power}·log I0(κ) − {rate}·κ) is not integrable on [0, ∞)"
        )));
    }
    // Peak: the log-integrand slope is power·r(κ) − rate. It is only
    // positive at 0 when rate < 0, which forces power < rate < 0.
    let mode = if rate >= 0.0 {
        0.0
    } else {
        let target = rate / power;
        let mut hi = 1.0;
        while bessel_ratio(hi) < target {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if bessel_ratio(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let decay = rate - power;
    let log_growth = -0.5 * power;
    let mut kmax = mode + 40.0 / decay;
    for _ in 0..2 {
        kmax = mode + (log_growth * kmax.ln()).max(0.0) / decay + 40.0 / decay;
    }
    let lf = |k: f64| power * log_bessel_i0(k) - rate * k;
    let peak = lf(mode);
    while lf(kmax) - peak > -50.0 {
        kmax = mode + 2.0 * (kmax - mode);
    }
    Ok((mode, kmax))
}

/// `log ∫₀^∞ I0(κ)^(−η) exp(−η β0 κ) dκ`, the log normalizer of the target.
pub fn log_normalizer(post: &PosteriorParams) -> Result<f64> {
    log_bessel_laplace(-post.eta, post.eta * post.beta0)
}

/// Expected acceptance probability of the rejection sampler driven by `env`,
/// counting proposals that fall below the truncation point as rejections.
///
/// Uses the envelope's dominating constant [`Envelope::threshold`], so the
/// value is the acceptance rate the samplers actually achieve.
pub fn expected_acceptance(post: &PosteriorParams, env: &Envelope) -> Result<f64> {
    let log_z = log_normalizer(post)?;
    Ok(log_expected_acceptance(post, env, log_z).exp())
}

/// Same as [`expected_acceptance`] with a precomputed log normalizer.
pub fn log_expected_acceptance(post: &PosteriorParams, env: &Envelope, log_z: f64) -> f64 {
    let eta = post.eta;
    let shape = eta * env.alpha + 1.0;
    let rate = eta * env.beta;
    shape * rate.ln() - ln_gamma(shape) - rate * env.epsilon - eta * env.threshold() + log_z
}
