//! The end-to-end verification suite: exactness against quadrature CDFs,
//! acceptance-rate consistency, plain/squeezed equivalence, envelope
//! domination, efficiency floors and the errata report.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::sampler::{KappaSampler, Method, SampleStats};
use crate::tuning::{
    approx_tune, expected_acceptance, g_value, integration_range, oracle_tune, Envelope, PosteriorParams, WMode,
};
use crate::validation::cdf::{quadrature_cdf, CdfTable};
use crate::validation::efficiency::{beta0_grid, sig9};
use crate::validation::errata::{adjudicate_errata, ErrataReport};
use crate::validation::ks::{ks_test, KsResult};

pub const EXACTNESS_ETAS: [f64; 4] = [1.0, 5.0, 10.0, 100.0];
pub const EXACTNESS_BETA0S: [f64; 7] = [-0.9, -0.5, 0.0, 0.3, 0.9, 2.0, 5.0];
/// KS significance level.
pub const KS_ALPHA: f64 = 0.01;
/// Allowed deviation of the observed acceptance rate, in binomial σ.
pub const ACCEPTANCE_SIGMAS: f64 = 3.0;
/// First-round failures tolerated, each of which must pass on a fresh seed.
pub const MAX_MARGINAL_FAILURES: usize = 2;
/// Tolerance for `η(g(κ) − threshold) ≤ tol` and `|g(0) − g(κ0)|` with exact W.
pub const DOMINATION_TOL: f64 = 1e-9;
pub const EFFICIENCY_FLOOR: f64 = 0.7;
pub const ORACLE_SLACK: f64 = 1e-6;
pub const WINITZKI_MAX_LOSS: f64 = 0.005;

const CDF_TOL: f64 = 1e-10;
const RERUN_OFFSET: u64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactnessCase {
    pub eta: f64,
    pub beta0: f64,
    pub method: Method,
    pub w_mode: WMode,
}

/// The 4 × 7 parameter grid crossed with both loops and both W modes.
pub fn exactness_cases() -> Vec<ExactnessCase> {
    let mut out = Vec::new();
    for &eta in &EXACTNESS_ETAS {
        for &beta0 in &EXACTNESS_BETA0S {
            for method in Method::ALL {
                for w_mode in WMode::ALL {
                    out.push(ExactnessCase {
                        eta,
                        beta0,
                        method,
                        w_mode,
                    });
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactnessOutcome {
    pub case: ExactnessCase,
    pub seed_index: u64,
    pub ks: KsResult,
    pub acceptance: f64,
    pub expected_acceptance: f64,
    /// `(observed − expected) / σ` with binomial σ over all proposals.
    pub z: f64,
    pub stats: SampleStats,
}

impl ExactnessOutcome {
    pub fn ks_pass(&self) -> bool {
        self.ks.p_value > KS_ALPHA
    }

    pub fn acceptance_pass(&self) -> bool {
        self.z.abs() <= ACCEPTANCE_SIGMAS
    }
}

/// Draws `n` values for one case and compares them with the quadrature CDF.
pub fn run_exactness_case(
    case: &ExactnessCase,
    table: &CdfTable,
    n: usize,
    rng: &mut RngStream,
    seed_index: u64,
) -> Result<ExactnessOutcome> {
    let post = PosteriorParams::new(case.eta, case.beta0)?;
    let env = approx_tune(&post, case.w_mode);
    let sampler = KappaSampler::new(&post, &env, case.method);
    let mut stats = SampleStats::default();
    let draws = (0..n)
        .map(|_| sampler.sample(rng, &mut stats))
        .collect::<Result<Vec<_>>>()?;
    let ks = ks_test(&draws, table)?;
    let expected = expected_acceptance(&post, &env)?;
    let observed = stats.acceptance_rate();
    let sigma = (expected * (1.0 - expected) / stats.proposals as f64).sqrt();
    Ok(ExactnessOutcome {
        case: *case,
        seed_index,
        ks,
        acceptance: observed,
        expected_acceptance: expected,
        z: (observed - expected) / sigma,
        stats,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactnessSummary {
    pub first: Vec<ExactnessOutcome>,
    /// Fresh-seed reruns of every case that failed either check.
    pub reruns: Vec<ExactnessOutcome>,
}

impl ExactnessSummary {
    fn check(&self, pass: impl Fn(&ExactnessOutcome) -> bool) -> bool {
        let failed: Vec<&ExactnessOutcome> = self.first.iter().filter(|o| !pass(o)).collect();
        failed.len() <= MAX_MARGINAL_FAILURES
            && failed
                .iter()
                .all(|f| self.reruns.iter().find(|r| r.case == f.case).is_some_and(&pass))
    }

    pub fn ks_failures(&self) -> usize {
        self.first.iter().filter(|o| !o.ks_pass()).count()
    }

    pub fn acceptance_failures(&self) -> usize {
        self.first.iter().filter(|o| !o.acceptance_pass()).count()
    }

    pub fn ks_passed(&self) -> bool {
        self.check(ExactnessOutcome::ks_pass)
    }

    pub fn acceptance_passed(&self) -> bool {
        self.check(ExactnessOutcome::acceptance_pass)
    }
}

/// Runs every case with `n` draws. Case `i` uses substream `i` of `seed`;
/// its rerun uses substream `2⁴⁰ + i`.
pub fn verify_exactness(cases: &[ExactnessCase], n: usize, seed: u64) -> Result<ExactnessSummary> {
    let mut params: Vec<(f64, f64)> = cases.iter().map(|c| (c.eta, c.beta0)).collect();
    params.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    params.dedup();
    let tables = params
        .par_iter()
        .map(|&(eta, b0)| quadrature_cdf(&PosteriorParams::new(eta, b0)?, CDF_TOL))
        .collect::<Result<Vec<_>>>()?;
    let table_for = |c: &ExactnessCase| {
        let i = params.iter().position(|&p| p == (c.eta, c.beta0)).expect("table built");
        &tables[i]
    };
    let root = RngStream::new(seed);
    let run = |i: usize, offset: u64| {
        let c = &cases[i];
        let idx = offset + i as u64;
        run_exactness_case(c, table_for(c), n, &mut root.split(idx), idx)
    };
    let first = (0..cases.len())
        .into_par_iter()
        .map(|i| run(i, 0))
        .collect::<Result<Vec<_>>>()?;
    let reruns = first
        .iter()
        .enumerate()
        .filter(|(_, o)| !o.ks_pass() || !o.acceptance_pass())
        .map(|(i, _)| run(i, RERUN_OFFSET))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExactnessSummary { first, reruns })
}

/// `max η(g(κ) − threshold)` over 1000 points of `[0, κ_max]`, clustered
/// toward 0. Non-positive means the envelope dominates on the grid.
pub fn envelope_excess(post: &PosteriorParams, env: &Envelope) -> Result<f64> {
    let (_, kmax) = integration_range(-post.eta(), post.eta() * post.beta0())?;
    let upper = kmax.max(4.0 * env.kappa0);
    let t = env.threshold();
    Ok((0..1000)
        .map(|i| {
            let k = upper * (i as f64 / 999.0).powi(2);
            post.eta() * (g_value(post, env, k) - t)
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Whether plain and squeezed loops return bit-identical draws on a shared stream.
pub fn decision_equivalence(post: &PosteriorParams, env: &Envelope, n: usize, rng: &RngStream) -> Result<bool> {
    let plain = KappaSampler::new(post, env, Method::Plain);
    let squeezed = KappaSampler::new(post, env, Method::Squeezed);
    let (mut a, mut b) = (rng.clone(), rng.clone());
    let (mut sa, mut sb) = (SampleStats::default(), SampleStats::default());
    for _ in 0..n {
        let x = plain.sample(&mut a, &mut sa)?;
        let y = squeezed.sample(&mut b, &mut sb)?;
        if x.to_bits() != y.to_bits() {
            return Ok(false);
        }
    }
    Ok(sa.proposals == sb.proposals)
}

/// Settings for [`verify`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    /// β0 grid size for the efficiency checks.
    pub grid: usize,
    /// Draws per exactness case.
    pub n: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            grid: 200,
            n: 100_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub errata: ErrataReport,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.errata.resolved()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(s, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        let _ = writeln!(
            s,
            "{} errata: {}",
            if self.errata.resolved() { "PASS" } else { "FAIL" },
            if self.errata.resolved() {
                "both claims resolved"
            } else {
                "unresolved"
            }
        );
        s.push('\n');
        s.push_str(&self.errata.render());
        s
    }
}

/// Runs the whole suite. All randomness comes from `config.seed`.
pub fn verify(config: &VerifyConfig) -> Result<VerifyReport> {
    if config.grid < 10 {
        return Err(Error::InvalidArgument(format!(
            "grid must have at least 10 points, got {}",
            config.grid
        )));
    }
    if config.n < 100 {
        return Err(Error::InvalidArgument(format!(
            "need at least 100 draws per case, got {}",
            config.n
        )));
    }
    let mut checks = Vec::new();

    let summary = verify_exactness(&exactness_cases(), config.n, config.seed)?;
    checks.push(Check {
        name: "exactness".into(),
        passed: summary.ks_passed(),
        detail: format!(
            "{} cases, {} KS failures at p <= {KS_ALPHA} (<= {MAX_MARGINAL_FAILURES} allowed, reruns must pass), min p = {}",
            summary.first.len(),
            summary.ks_failures(),
            sig9(summary.first.iter().map(|o| o.ks.p_value).fold(1.0, f64::min))
        ),
    });
    checks.push(Check {
        name: "acceptance-rate".into(),
        passed: summary.acceptance_passed(),
        detail: format!(
            "{} cases outside {ACCEPTANCE_SIGMAS} sigma, max |z| = {}",
            summary.acceptance_failures(),
            sig9(summary.first.iter().map(|o| o.z.abs()).fold(0.0, f64::max))
        ),
    });

    let root = RngStream::new(config.seed).split(RERUN_OFFSET * 2);
    let mut equivalent = true;
    for (i, (&eta, &b0)) in [1.0, 10.0, 100.0]
        .iter()
        .flat_map(|e| [-0.9, 0.0, 0.9, 5.0].iter().map(move |b| (e, b)))
        .enumerate()
    {
        let post = PosteriorParams::new(eta, b0)?;
        let env = approx_tune(&post, WMode::Winitzki);
        equivalent &= decision_equivalence(&post, &env, 10_000, &root.split(i as u64))?;
    }
    checks.push(Check {
        name: "decision-equivalence".into(),
        passed: equivalent,
        detail: "plain vs squeezed, 10^4 draws x 12 parameter points".into(),
    });

    let grid = beta0_grid(config.grid);
    let mut min_eff = f64::INFINITY;
    let mut worst_gap = f64::INFINITY;
    let mut w_loss = 0.0f64;
    let mut excess = f64::NEG_INFINITY;
    let mut equal_gap = 0.0f64;
    for &eta in &[1.0, 10.0, 100.0] {
        let rows = grid
            .par_iter()
            .map(|&b0| -> Result<_> {
                let post = PosteriorParams::new(eta, b0)?;
                let wz = approx_tune(&post, WMode::Winitzki);
                let ex = approx_tune(&post, WMode::Exact);
                let or = oracle_tune(&post)?;
                let (e_wz, e_ex, e_or) = (
                    expected_acceptance(&post, &wz)?,
                    expected_acceptance(&post, &ex)?,
                    expected_acceptance(&post, &or)?,
                );
                let exc = envelope_excess(&post, &wz)?.max(envelope_excess(&post, &ex)?);
                Ok((e_wz, e_ex, e_or, exc, (ex.g_at_zero - ex.g_at_kappa0).abs()))
            })
            .collect::<Result<Vec<_>>>()?;
        for (e_wz, e_ex, e_or, exc, gap) in rows {
            min_eff = min_eff.min(e_wz);
            worst_gap = worst_gap.min(e_or - e_wz);
            w_loss = w_loss.max((e_wz - e_ex).abs());
            excess = excess.max(exc);
            equal_gap = equal_gap.max(gap);
        }
    }
    checks.push(Check {
        name: "efficiency-floor".into(),
        passed: min_eff >= EFFICIENCY_FLOOR,
        detail: format!(
            "min expected acceptance {} over eta in {{1,10,100}}, {} points",
            sig9(min_eff),
            config.grid
        ),
    });
    checks.push(Check {
        name: "oracle-dominance".into(),
        passed: worst_gap >= -ORACLE_SLACK,
        detail: format!("min(eff_oracle - eff_approx) = {}", sig9(worst_gap)),
    });
    checks.push(Check {
        name: "winitzki-impact".into(),
        passed: w_loss <= WINITZKI_MAX_LOSS,
        detail: format!("max |eff_winitzki - eff_exact| = {}", sig9(w_loss)),
    });
    checks.push(Check {
        name: "envelope-domination".into(),
        passed: excess <= DOMINATION_TOL && equal_gap <= DOMINATION_TOL,
        detail: format!(
            "max eta(g - threshold) = {}, max |g(0) - g(k0)| (exact W) = {}",
            sig9(excess),
            sig9(equal_gap)
        ),
    });

    Ok(VerifyReport {
        checks,
        errata: adjudicate_errata()?,
    })
}
