//! Oracles and reproduction harness: quadrature CDFs, KS tests, efficiency
//! sweeps, the errata report, throughput benchmarks and the full
//! verification suite.

pub mod bench;
pub mod cdf;
pub mod efficiency;
pub mod errata;
pub mod ks;
pub mod verify;

pub use bench::{compare_methods, throughput_bench, time_fixed_workload, BenchResult, BenchScenario, MethodComparison};
pub use cdf::{quadrature_cdf, CdfTable};
pub use efficiency::{beta0_grid, efficiency_sweep, sig9, EfficiencyCurve, EfficiencyPoint, SweepConfig};
pub use errata::{adjudicate_errata, ErrataReport};
pub use ks::{ks_one_sample, ks_test, ks_two_sample, KsResult};
pub use verify::{verify, VerifyConfig, VerifyReport};
