use thiserror::Error;

use crate::sampler::SampleStats;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of a function.
    #[error("{func}: argument {value} is outside the domain ({expected})")]
    Domain {
        func: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// `(eta, beta0)` does not describe a normalizable Bessel exponential density.
    #[error("invalid posterior parameters eta = {eta}, beta0 = {beta0} (need eta > 0, beta0 > -1)")]
    InvalidParams { eta: f64, beta0: f64 },

    #[error("integral diverges: {0}")]
    Divergent(String),

    /// A root bracket or optimizer failed during numeric tuning.
    #[error("numeric failure in {context} (eta = {eta}, beta0 = {beta0}, kappa0 = {kappa0})")]
    Numeric {
        context: &'static str,
        eta: f64,
        beta0: f64,
        kappa0: f64,
    },

    /// The rejection loop ran past its iteration cap. Signals a broken envelope.
    #[error("rejection loop exceeded {cap} proposals without acceptance: {stats:?}")]
    IterationCap { cap: u64, stats: SampleStats },

    #[error("invalid posterior: {0}")]
    InvalidPosterior(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
