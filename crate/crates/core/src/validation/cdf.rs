//! Tabulated CDF of a Bessel exponential distribution, built from composite
//! Gauss–Legendre panels and interpolated with cubic Hermite pieces.

use crate::error::{Error, Result};
use crate::quadrature::gl20_integral;
use crate::rng::RngStream;
use crate::special::log_bessel_i0;
use crate::tuning::{integration_range, PosteriorParams};

const INITIAL_PANELS: usize = 32;
const MAX_DEPTH: u32 = 40;

/// Normalized CDF on `[0, κ_max]`, accurate to the requested tolerance.
///
/// Nodes are panel endpoints; they cluster where the density changes fastest.
#[derive(Debug, Clone)]
pub struct CdfTable {
    post: PosteriorParams,
    nodes: Vec<f64>,
    cdf: Vec<f64>,
    pdf: Vec<f64>,
    log_norm: f64,
    mean: f64,
    second_moment: f64,
}

struct Panel {
    a: f64,
    b: f64,
    depth: u32,
}

/// Builds the table with pointwise CDF error at most `tol`.
pub fn quadrature_cdf(post: &PosteriorParams, tol: f64) -> Result<CdfTable> {
    if !(tol > 1e-12 && tol < 1e-3) {
        return Err(Error::InvalidArgument(format!(
            "CDF tolerance must lie in (1e-12, 1e-3), got {tol}"
        )));
    }
    let (eta, rate) = (post.eta(), post.eta() * post.beta0());
    let (mode, kmax) = integration_range(-eta, rate)?;
    let lf = |k: f64| -eta * log_bessel_i0(k) - rate * k;
    let peak = lf(mode);
    let f = |k: f64| (lf(k) - peak).exp();

    let mut breaks: Vec<f64> = (0..=INITIAL_PANELS)
        .map(|i| kmax * i as f64 / INITIAL_PANELS as f64)
        .collect();
    if mode > 0.0 {
        breaks.push(mode);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
    }
    let coarse: f64 = breaks.windows(2).map(|w| gl20_integral(f, w[0], w[1])).sum();
    let budget = 0.05 * tol * coarse;

    // depth-first, left to right, so accepted panels come out in order
    let mut stack: Vec<Panel> = breaks
        .windows(2)
        .rev()
        .map(|w| Panel {
            a: w[0],
            b: w[1],
            depth: 0,
        })
        .collect();
    let mut nodes = vec![0.0];
    let mut pdf = vec![f(0.0)];
    let mut cum = vec![0.0];
    let (mut m1, mut m2) = (0.0, 0.0);
    while let Some(p) = stack.pop() {
        let mid = 0.5 * (p.a + p.b);
        let whole = gl20_integral(f, p.a, p.b);
        let left = gl20_integral(f, p.a, mid);
        let right = gl20_integral(f, mid, p.b);
        let (fa, fb) = (f(p.a), f(p.b));
        let h = p.b - p.a;
        let hermite_mid = 0.5 * (left + right) + h * (fa - fb) / 8.0;
        let err = (whole - left - right).abs().max((hermite_mid - left).abs());
        if err > budget && p.depth < MAX_DEPTH {
            stack.push(Panel {
                a: mid,
                b: p.b,
                depth: p.depth + 1,
            });
            stack.push(Panel {
                a: p.a,
                b: mid,
                depth: p.depth + 1,
            });
            continue;
        }
        let last = *cum.last().unwrap();
        cum.push(last + left + right);
        nodes.push(p.b);
        pdf.push(fb);
        m1 += gl20_integral(|k| k * f(k), p.a, p.b);
        m2 += gl20_integral(|k| k * k * f(k), p.a, p.b);
    }
    let total = *cum.last().unwrap();
    Ok(CdfTable {
        post: *post,
        cdf: cum.iter().map(|c| c / total).collect(),
        pdf: pdf.iter().map(|d| d / total).collect(),
        nodes,
        log_norm: peak + total.ln(),
        mean: m1 / total,
        second_moment: m2 / total,
    })
}

impl CdfTable {
    pub fn params(&self) -> &PosteriorParams {
        &self.post
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn kappa_max(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// `log ∫ I0(κ)^(−η) exp(−η β0 κ) dκ` from this table's panels.
    pub fn log_normalizer(&self) -> f64 {
        self.log_norm
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.second_moment - self.mean * self.mean
    }

    fn panel(&self, kappa: f64) -> usize {
        self.nodes
            .partition_point(|&n| n <= kappa)
            .clamp(1, self.nodes.len() - 1)
            - 1
    }

    pub fn cdf(&self, kappa: f64) -> f64 {
        if kappa <= 0.0 {
            return 0.0;
        }
        if kappa >= self.kappa_max() {
            return 1.0;
        }
        let i = self.panel(kappa);
        let (a, b) = (self.nodes[i], self.nodes[i + 1]);
        let h = b - a;
        let rise = self.cdf[i + 1] - self.cdf[i];
        if rise <= 0.0 {
            return self.cdf[i];
        }
        // Fritsch–Carlson: scaling the end slopes so that α² + β² ≤ 9 keeps
        // the cubic monotone where the rise is tiny next to the slopes.
        let (mut m0, mut m1) = (h * self.pdf[i], h * self.pdf[i + 1]);
        let s = (m0 * m0 + m1 * m1) / (rise * rise);
        if s > 9.0 {
            let tau = 3.0 / s.sqrt();
            m0 *= tau;
            m1 *= tau;
        }
        let t = (kappa - a) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * self.cdf[i]
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * self.cdf[i + 1]
            + (t3 - t2) * m1;
        v.clamp(self.cdf[i], self.cdf[i + 1])
    }

    /// Normalized density, computed directly rather than interpolated.
    pub fn pdf(&self, kappa: f64) -> f64 {
        if kappa < 0.0 {
            return 0.0;
        }
        (self.post.log_density_unnormalized(kappa) - self.log_norm).exp()
    }

    /// Smallest κ with `cdf(κ) ≥ p`, by bisection inside the bracketing panel.
    pub fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        if p >= 1.0 {
            return self.kappa_max();
        }
        let j = self.cdf.partition_point(|&c| c < p).clamp(1, self.nodes.len() - 1);
        let (mut lo, mut hi) = (self.nodes[j - 1], self.nodes[j]);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    /// Inverse-transform draw; an independent route to exact samples.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        self.quantile(rng.uniform())
    }
}
