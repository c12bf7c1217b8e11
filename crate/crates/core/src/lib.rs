//! # besselexp
//!
//! Exact, fast sampling from the Bessel exponential distribution
//!
//! ```text
//! p(κ) ∝ I0(κ)^(-η) · exp(-η β0 κ),   κ ≥ 0,  η > 0,  β0 > -1,
//! ```
//!
//! which is the posterior of the von Mises concentration parameter under its
//! conjugate prior. Draws come from a rejection sampler whose proposal is a
//! left-shifted gamma distribution with closed-form tuned parameters; the
//! acceptance probability stays above 0.7 for every `(η, β0)`.
//!
//! The crate is organized as:
//!
//! - [`special`]: log-scaled Bessel functions, Lambert W, log-gamma, digamma.
//! - [`tuning`]: proposal tuning (closed form and numeric optimum) and the
//!   expected acceptance probability.
//! - [`sampler`]: gamma variates, the plain and squeezed rejection loops.
//! - [`posterior`]: von Mises density and sampling, conjugate updates, Gibbs.
//! - [`validation`]: quadrature CDFs, KS tests, efficiency sweeps, errata
//!   checks and throughput measurement.
//!
//! ```
//! use besselexp::{approx_tune, sample_kappa_squeezed, PosteriorParams, RngStream, WMode};
//!
//! let post = PosteriorParams::new(10.0, 0.5).unwrap();
//! let env = approx_tune(&post, WMode::Winitzki);
//! let mut rng = RngStream::new(42);
//! let (kappa, _stats) = sample_kappa_squeezed(&post, &env, &mut rng).unwrap();
//! assert!(kappa >= 0.0);
//! ```

// `!(x > 0.0)` style guards are deliberate: NaN must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod posterior;
pub mod quadrature;
pub mod rng;
pub mod sampler;
pub mod special;
pub mod tuning;
pub mod validation;

pub use error::{Error, Result};
pub use posterior::{
    gibbs_sample, posterior_hyperparams, read_angles, sample_von_mises, von_mises_log_density, wrap_angle,
    ConjugatePrior, GibbsChain, GibbsConfig, VonMisesParams,
};
pub use rng::RngStream;
pub use sampler::{
    gamma_variate, sample_batch, sample_kappa, sample_kappa_squeezed, truncated_gamma_variate, KappaSampler, Method,
    SampleStats,
};
pub use special::{bessel_eval, digamma, lambert_w0, lambert_w0_winitzki, log_gamma_fn, BesselEval};
pub use tuning::{
    approx_tune, expected_acceptance, g_value, h_value, log_bessel_laplace, log_expected_acceptance, log_normalizer,
    oracle_tune, Envelope, PosteriorParams, WMode,
};
