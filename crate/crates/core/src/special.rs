//! Special functions used throughout the crate.
//!
//! Everything here works in the log domain where it matters: `log I0(κ)` is
//! produced directly so that κ far beyond the `exp` overflow point (≈ 709) is
//! handled without loss.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};

/// Switch point between the power series and the large-argument expansion.
const BESSEL_SERIES_MAX: f64 = 15.0;

/// Inputs this far below `-1/e` are treated as rounding noise and clamped.
const BRANCH_TOLERANCE: f64 = 1e-14;

const INV_E: f64 = 1.0 / E;

/// `log I0(κ)` together with the mean resultant `r(κ) = I1(κ)/I0(κ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    pub log_i0: f64,
    pub ratio: f64,
}

/// Evaluates `log I0(κ)` and `I1(κ)/I0(κ)` for `κ ≥ 0`.
///
/// Uses the ascending series up to κ = 15 and the Hankel large-argument
/// expansion beyond, where the smallest term is below `1e-13` relative.
pub fn bessel_eval(kappa: f64) -> Result<BesselEval> {
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(Error::Domain {
            func: "bessel_eval",
            value: kappa,
            expected: "finite kappa >= 0",
        });
    }
    let (log_i0, ratio) = if kappa <= BESSEL_SERIES_MAX {
        series_i0_i1(kappa)
    } else {
        asymptotic_i0_i1(kappa)
    };
    Ok(BesselEval { log_i0, ratio })
}

/// `log I0(κ)` without argument checks. Hot-path variant for the samplers.
#[inline]
pub fn log_bessel_i0(kappa: f64) -> f64 {
    debug_assert!(kappa >= 0.0);
    if kappa <= BESSEL_SERIES_MAX {
        series_log_i0(kappa)
    } else {
        asymptotic_log_i0(kappa)
    }
}

/// `I1(κ)/I0(κ)` without argument checks.
#[inline]
pub fn bessel_ratio(kappa: f64) -> f64 {
    if kappa <= BESSEL_SERIES_MAX {
        series_i0_i1(kappa).1
    } else {
        asymptotic_i0_i1(kappa).1
    }
}

// 1/k² for the series terms; κ ≤ 15 converges well before k = 64.
const INV_SQUARES: [f64; 64] = {
    let mut t = [0.0; 64];
    let mut k = 1;
    while k < 64 {
        t[k] = 1.0 / (k * k) as f64;
        k += 1;
    }
    t
};

const INV_INTEGERS: [f64; 64] = {
    let mut t = [0.0; 64];
    let mut k = 1;
    while k < 64 {
        t[k] = 1.0 / k as f64;
        k += 1;
    }
    t
};

#[inline]
fn series_log_i0(kappa: f64) -> f64 {
    let q = 0.25 * kappa * kappa;
    let mut term = 1.0;
    let mut tail = 0.0;
    for &inv in &INV_SQUARES[1..] {
        term *= q * inv;
        tail += term;
        if term <= 1e-17 * (1.0 + tail) {
            break;
        }
    }
    tail.ln_1p()
}

fn series_i0_i1(kappa: f64) -> (f64, f64) {
    let q = 0.25 * kappa * kappa;
    // I0 = 1 + tail0, I1 = (κ/2)·sum1
    let mut t0 = 1.0;
    let mut tail0 = 0.0;
    let mut t1 = 1.0;
    let mut sum1 = 1.0;
    let mut k = 1.0;
    loop {
        t0 *= q / (k * k);
        tail0 += t0;
        t1 *= q / (k * (k + 1.0));
        sum1 += t1;
        if t0 <= 1e-17 * (1.0 + tail0) {
            break;
        }
        k += 1.0;
    }
    (tail0.ln_1p(), 0.5 * kappa * sum1 / (1.0 + tail0))
}

#[inline]
fn asymptotic_log_i0(kappa: f64) -> f64 {
    let inv8x = 1.0 / (8.0 * kappa);
    let mut term = 1.0;
    let mut sum = 1.0;
    for (k, &inv) in INV_INTEGERS.iter().enumerate().take(60).skip(1) {
        let odd = (2 * k - 1) as f64;
        let next = term * odd * odd * inv8x * inv;
        if next > term {
            break;
        }
        term = next;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    kappa - 0.5 * (2.0 * PI * kappa).ln() + sum.ln()
}

fn asymptotic_i0_i1(kappa: f64) -> (f64, f64) {
    let inv8x = 1.0 / (8.0 * kappa);
    let (mut t0, mut s0) = (1.0f64, 1.0f64);
    let (mut t1, mut s1) = (1.0f64, 1.0f64);
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let n0 = t0 * odd * odd * inv8x / k as f64;
        if n0 > t0 {
            break;
        }
        // I1 coefficients: -(4 - (2k-1)^2) / (8kx)
        let n1 = -t1 * (4.0 - odd * odd) * inv8x / k as f64;
        t0 = n0;
        t1 = n1;
        s0 += t0;
        s1 += t1;
        if t0 < 1e-17 * s0 && t1.abs() < 1e-17 * s1.abs() {
            break;
        }
    }
    (kappa - 0.5 * (2.0 * PI * kappa).ln() + s0.ln(), s1 / s0)
}

fn check_branch(func: &'static str, t: f64) -> Result<f64> {
    if t.is_nan() || t < -INV_E - BRANCH_TOLERANCE || t == f64::INFINITY {
        return Err(Error::Domain {
            func,
            value: t,
            expected: "finite t >= -1/e",
        });
    }
    Ok(t.max(-INV_E))
}

/// Principal branch `W0(t)` of the Lambert W function, `t ≥ -1/e`.
///
/// Halley iteration. The seed is the Winitzki approximation on
/// `[-1/e, e]`, the branch-point series very close to `-1/e`, and the
/// two-term logarithmic expansion for large `t` (where the Winitzki form is
/// not usable: its denominator changes sign near `t ≈ 11.4`).
pub fn lambert_w0(t: f64) -> Result<f64> {
    let t = check_branch("lambert_w0", t)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let p2 = 2.0 * (E * t + 1.0);
    if p2 <= 0.0 {
        return Ok(-1.0);
    }
    let p = p2.sqrt();
    if p < 1e-3 {
        // branch-point series; next term is O(p^5)
        return Ok(-1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0)))));
    }
    let mut w = if p < 0.3 {
        -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))))
    } else if t <= E {
        winitzki(t)
    } else {
        let l1 = t.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };
    for _ in 0..20 {
        let ew = w.exp();
        let f = w * ew - t;
        if f == 0.0 {
            break;
        }
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w.max(-1.0))
}

/// Winitzki's closed-form approximation to `W0(t)`, evaluated exactly as
///
/// ```text
/// W0(t) ≈ e·t / (1 + [ (2et + 2)^(-1/2) + (e - 1)^(-1) - 2^(-1/2) ]^(-1))
/// ```
///
/// Intended for `t ∈ [-1/e, 0]`, which is where the tuner calls it. There the
/// absolute error against [`lambert_w0`] is at most `2.61e-3` (dense-grid
/// measurement, maximum near `t ≈ -0.22`), and it is exact at both ends.
/// For `t` beyond ≈ 11.4 the bracket changes sign and the value is
/// meaningless; callers needing large arguments should use [`lambert_w0`].
pub fn lambert_w0_winitzki(t: f64) -> Result<f64> {
    let t = check_branch("lambert_w0_winitzki", t)?;
    Ok(winitzki(t))
}

#[inline]
fn winitzki(t: f64) -> f64 {
    let arg = (2.0 * E * t + 2.0).max(0.0);
    let bracket = 1.0 / arg.sqrt() + 1.0 / (E - 1.0) - std::f64::consts::FRAC_1_SQRT_2;
    E * t / (1.0 + 1.0 / bracket)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `log Γ(x)` for `x > 0`.
pub fn log_gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            func: "log_gamma_fn",
            value: x,
            expected: "finite x > 0",
        });
    }
    Ok(ln_gamma(x))
}

pub(crate) fn ln_gamma(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    if x < 0.5 {
        // reflection
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Digamma `Ψ(x) = d/dx log Γ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            func: "digamma",
            value: x,
            expected: "finite x > 0",
        });
    }
    Ok(psi(x))
}

pub(crate) fn psi(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // Bernoulli tail: -sum B_2k / (2k x^2k)
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
    acc + x.ln() - 0.5 * inv - tail
}
