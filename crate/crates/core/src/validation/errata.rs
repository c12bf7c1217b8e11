//! Numerical checks of two closed-form statements about the Bessel
//! exponential distribution:
//!
//! 1. At η = 1 and β0 > 1 the normalizing constant is `√(β0² − 1)`.
//! 2. Replacing `I0(κ)` by `exp(κ)/√(2πκ)` leaves a gamma density with shape
//!    `η/2 + 1` and rate `η(β0 − 1)`.
//!
//! Each statement is tested against competing hypotheses with quadrature
//! and exact Bessel ratios; the report names the hypothesis with the
//! smallest residual.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::special::bessel_ratio;
use crate::tuning::{log_bessel_laplace, log_normalizer, PosteriorParams};
use crate::validation::cdf::quadrature_cdf;
use crate::validation::efficiency::sig9;

/// Residual bound a winning hypothesis must meet in a decisive case.
pub const WINNER_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypothesis {
    pub label: String,
    pub predicted: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrataCase {
    pub setting: String,
    pub observed_label: String,
    pub observed: f64,
    pub hypotheses: Vec<Hypothesis>,
    /// Decisive cases must be won with a residual below [`WINNER_TOLERANCE`].
    pub decisive: bool,
}

impl ErrataCase {
    fn new(setting: String, observed_label: &str, observed: f64, decisive: bool) -> Self {
        Self {
            setting,
            observed_label: observed_label.into(),
            observed,
            hypotheses: Vec::new(),
            decisive,
        }
    }

    fn hypothesis(mut self, label: &str, predicted: f64) -> Self {
        let residual = if predicted.is_finite() {
            (self.observed - predicted).abs()
        } else {
            f64::INFINITY
        };
        self.hypotheses.push(Hypothesis {
            label: label.into(),
            predicted,
            residual,
        });
        self
    }

    pub fn winner(&self) -> &Hypothesis {
        self.hypotheses
            .iter()
            .min_by(|a, b| a.residual.total_cmp(&b.residual))
            .expect("at least one hypothesis")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrataItem {
    pub claim: String,
    pub cases: Vec<ErrataCase>,
    pub verdict: String,
}

impl ErrataItem {
    /// Decisive cases share one winner, each below [`WINNER_TOLERANCE`].
    /// Supporting cases that offer that hypothesis must also prefer it.
    pub fn resolved(&self) -> bool {
        let decisive: Vec<&ErrataCase> = self.cases.iter().filter(|c| c.decisive).collect();
        let Some(first) = decisive.first() else {
            return false;
        };
        let label = &first.winner().label;
        let decisive_ok = decisive
            .iter()
            .all(|c| &c.winner().label == label && c.winner().residual < WINNER_TOLERANCE);
        let supporting_ok = self
            .cases
            .iter()
            .filter(|c| !c.decisive && c.hypotheses.iter().any(|h| &h.label == label))
            .all(|c| &c.winner().label == label);
        decisive_ok && supporting_ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrataReport {
    pub items: Vec<ErrataItem>,
}

const DENSITY_AS_WRITTEN: &str = "sqrt(b0^2-1) normalizes exp(-b0 k)/I0(k)";
const RECIPROCAL: &str = "1/sqrt(b0^2-1) normalizes exp(-b0 k)/I0(k)";
const NUMERATOR: &str = "sqrt(b0^2-1) normalizes I0(k) exp(-b0 k)";

fn normalization_item() -> Result<ErrataItem> {
    let mut cases = Vec::new();
    for &b0 in &[1.5, 2.0, 5.0] {
        let claimed = (b0 * b0 - 1.0f64).sqrt();
        let a = (-log_bessel_laplace(1.0, b0)?).exp();
        cases.push(
            ErrataCase::new(format!("eta=1 beta0={b0}"), "1/integral I0(k) exp(-b0 k) dk", a, true)
                .hypothesis(NUMERATOR, claimed),
        );
    }
    cases.extend(written_cases()?);
    Ok(ErrataItem {
        claim: "eta=1, beta0>1: normalizing constant A = sqrt(beta0^2-1)".into(),
        cases,
        verdict: "sqrt(beta0^2-1) normalizes I0(k) exp(-beta0 k) (the Laplace transform of I0), \
                  not exp(-beta0 k)/I0(k); for the density as written neither sqrt(beta0^2-1) \
                  nor its reciprocal fits, and the constant has no closed form"
            .into(),
    })
}

fn written_cases() -> Result<Vec<ErrataCase>> {
    let mut out = Vec::new();
    for &b0 in &[1.5, 2.0, 5.0] {
        let claimed = (b0 * b0 - 1.0f64).sqrt();
        let a = (-log_normalizer(&PosteriorParams::new(1.0, b0)?)?).exp();
        out.push(
            ErrataCase::new(format!("eta=1 beta0={b0}"), "1/integral exp(-b0 k)/I0(k) dk", a, false)
                .hypothesis(DENSITY_AS_WRITTEN, claimed)
                .hypothesis(RECIPROCAL, 1.0 / claimed),
        );
    }
    Ok(out)
}

const RATE_MINUS: &str = "rate eta(b0-1)";
const RATE_PLUS: &str = "rate eta(b0+1)";

fn gamma_limit_item() -> Result<ErrataItem> {
    let eta = 200.0;
    let shape = eta / 2.0 + 1.0;
    let mut cases = Vec::new();
    // Local decay rate of the density, −d/dκ log p + (shape − 1)/κ, far in
    // the tail where the large-κ form of I0 is exact to rounding.
    for &b0 in &[0.5, 2.0, 5.0] {
        let kappa: f64 = 1e7;
        let observed = eta * (b0 + bessel_ratio(kappa)) + (shape - 1.0) / kappa;
        cases.push(
            ErrataCase::new(
                format!("eta={eta} beta0={b0} kappa={kappa:e}"),
                "-dlog p/dk + (shape-1)/k",
                observed,
                true,
            )
            .hypothesis(RATE_MINUS, eta * (b0 - 1.0))
            .hypothesis(RATE_PLUS, eta * (b0 + 1.0)),
        );
    }
    // Quadrature means against the gamma means shape/rate.
    for &b0 in &[2.0, -0.99] {
        let table = quadrature_cdf(&PosteriorParams::new(eta, b0)?, 1e-10)?;
        let gamma_mean = |rate: f64| if rate > 0.0 { shape / rate } else { f64::NAN };
        cases.push(
            ErrataCase::new(format!("eta={eta} beta0={b0}"), "quadrature mean", table.mean(), false)
                .hypothesis(RATE_MINUS, gamma_mean(eta * (b0 - 1.0)))
                .hypothesis(RATE_PLUS, gamma_mean(eta * (b0 + 1.0))),
        );
    }
    Ok(ErrataItem {
        claim: "large-kappa limit is gamma(shape eta/2+1, rate eta(beta0-1))".into(),
        cases,
        verdict: "the limiting rate is eta(beta0+1): I0(k)^-eta ~ (2 pi k)^(eta/2) exp(-eta k) \
                  adds eta to the exponential rate"
            .into(),
    })
}

/// Runs both checks. Deterministic: no random numbers are used.
pub fn adjudicate_errata() -> Result<ErrataReport> {
    Ok(ErrataReport {
        items: vec![normalization_item()?, gamma_limit_item()?],
    })
}

impl ErrataReport {
    pub fn resolved(&self) -> bool {
        self.items.iter().all(ErrataItem::resolved)
    }

    /// Plain-text report.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (i, item) in self.items.iter().enumerate() {
            let _ = writeln!(s, "[{}] claim: {}", i + 1, item.claim);
            for c in &item.cases {
                let _ = writeln!(
                    s,
                    "  {} ({}): {} = {}",
                    c.setting,
                    if c.decisive { "decisive" } else { "supporting" },
                    c.observed_label,
                    sig9(c.observed)
                );
                let best = c.winner().label.clone();
                for h in &c.hypotheses {
                    let _ = writeln!(
                        s,
                        "    {:<46} predicted {:>16}  residual {:>10}{}",
                        h.label,
                        sig9(h.predicted),
                        fmt_residual(h.residual),
                        if h.label == best { "  <- best" } else { "" }
                    );
                }
            }
            let _ = writeln!(s, "  verdict: {}", item.verdict);
            let _ = writeln!(
                s,
                "  status: {}",
                if item.resolved() { "RESOLVED" } else { "UNRESOLVED" }
            );
        }
        s
    }
}

fn fmt_residual(r: f64) -> String {
    if r.is_finite() {
        format!("{r:.3e}")
    } else {
        "n/a".into()
    }
}
