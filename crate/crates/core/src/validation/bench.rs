//! Wall-clock throughput of the rejection loops.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::sampler::{KappaSampler, Method, SampleStats};
use crate::tuning::{approx_tune, PosteriorParams, WMode};

/// What to sample while timing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BenchScenario {
    /// One parameter pair, tuned once.
    Fixed(PosteriorParams),
    /// Fresh `β0 ~ Uniform(−1, 1)` with retuning every `every` draws, as in a
    /// Gibbs sweep.
    Retuned { eta: f64, every: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchResult {
    pub method: Method,
    pub draws: u64,
    pub seconds: f64,
    pub samples_per_second: f64,
    pub stats: SampleStats,
}

impl BenchResult {
    /// Share of non-truncated proposals settled by a squeeze.
    pub fn squeeze_hit_rate(&self) -> f64 {
        let s = &self.stats;
        (s.squeeze_accepts + s.squeeze_rejects) as f64 / (s.proposals - s.truncation_rejects) as f64
    }
}

struct Workload {
    scenario: BenchScenario,
    method: Method,
    w_mode: WMode,
    sampler: Option<KappaSampler>,
    left_in_block: usize,
}

impl Workload {
    fn new(scenario: BenchScenario, method: Method, w_mode: WMode) -> Result<Self> {
        let sampler = match scenario {
            BenchScenario::Fixed(post) => Some(KappaSampler::new(&post, &approx_tune(&post, w_mode), method)),
            BenchScenario::Retuned { eta, every } => {
                if every == 0 || !(eta > 0.0 && eta.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "retuned benchmark needs eta > 0 and a positive block size (eta = {eta}, every = {every})"
                    )));
                }
                None
            }
        };
        Ok(Self {
            scenario,
            method,
            w_mode,
            sampler,
            left_in_block: 0,
        })
    }

    #[inline]
    fn draw(&mut self, rng: &mut RngStream, stats: &mut SampleStats) -> Result<f64> {
        if let BenchScenario::Retuned { eta, every } = self.scenario {
            if self.left_in_block == 0 {
                let post = PosteriorParams::new(eta, 2.0 * rng.uniform() - 1.0)?;
                self.sampler = Some(KappaSampler::new(&post, &approx_tune(&post, self.w_mode), self.method));
                self.left_in_block = every;
            }
            self.left_in_block -= 1;
        }
        self.sampler.as_ref().expect("sampler set").sample(rng, stats)
    }
}

/// Samples for about `seconds` and reports the rate.
pub fn throughput_bench(
    scenario: BenchScenario,
    method: Method,
    w_mode: WMode,
    seconds: f64,
    rng: &mut RngStream,
) -> Result<BenchResult> {
    if !(0.1..=600.0).contains(&seconds) {
        return Err(Error::InvalidArgument(format!(
            "benchmark duration must lie in [0.1, 600] seconds, got {seconds}"
        )));
    }
    let mut work = Workload::new(scenario, method, w_mode)?;
    let budget = Duration::from_secs_f64(seconds);
    let mut stats = SampleStats::default();
    let mut draws = 0u64;
    let mut sink = 0.0;
    let start = Instant::now();
    while start.elapsed() < budget {
        for _ in 0..1000 {
            sink += work.draw(rng, &mut stats)?;
        }
        draws += 1000;
    }
    let elapsed = start.elapsed().as_secs_f64();
    std::hint::black_box(sink);
    Ok(BenchResult {
        method,
        draws,
        seconds: elapsed,
        samples_per_second: draws as f64 / elapsed,
        stats,
    })
}

/// Times exactly `draws` draws from a fresh stream seeded with `seed`.
///
/// Both loops make identical decisions on identical streams, so for a given
/// seed the plain and squeezed runs do the same random work and differ only
/// in how each proposal is judged.
pub fn time_fixed_workload(
    scenario: BenchScenario,
    method: Method,
    w_mode: WMode,
    draws: u64,
    seed: u64,
) -> Result<BenchResult> {
    let mut work = Workload::new(scenario, method, w_mode)?;
    let mut rng = RngStream::new(seed);
    let mut stats = SampleStats::default();
    let mut sink = 0.0;
    let start = Instant::now();
    for _ in 0..draws {
        sink += work.draw(&mut rng, &mut stats)?;
    }
    let elapsed = start.elapsed().as_secs_f64();
    std::hint::black_box(sink);
    Ok(BenchResult {
        method,
        draws,
        seconds: elapsed,
        samples_per_second: draws as f64 / elapsed,
        stats,
    })
}

/// Median throughput of each loop over `rounds` interleaved fixed workloads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MethodComparison {
    pub plain: f64,
    pub squeezed: f64,
    pub rounds: usize,
    pub plain_stats: SampleStats,
    pub squeezed_stats: SampleStats,
}

pub fn compare_methods(
    scenario: BenchScenario,
    w_mode: WMode,
    draws: u64,
    rounds: usize,
    seed: u64,
) -> Result<MethodComparison> {
    if rounds == 0 {
        return Err(Error::InvalidArgument("need at least one round".into()));
    }
    let (mut plain, mut squeezed) = (Vec::new(), Vec::new());
    let (mut ps, mut ss) = (SampleStats::default(), SampleStats::default());
    // warm-up, not recorded
    time_fixed_workload(scenario, Method::Plain, w_mode, draws / 10 + 1, seed)?;
    time_fixed_workload(scenario, Method::Squeezed, w_mode, draws / 10 + 1, seed)?;
    for r in 0..rounds {
        let s = seed.wrapping_add(r as u64);
        // alternate which loop goes first
        let order = if r % 2 == 0 {
            Method::ALL
        } else {
            [Method::Squeezed, Method::Plain]
        };
        for m in order {
            let res = time_fixed_workload(scenario, m, w_mode, draws, s)?;
            match m {
                Method::Plain => {
                    plain.push(res.samples_per_second);
                    ps += res.stats;
                }
                Method::Squeezed => {
                    squeezed.push(res.samples_per_second);
                    ss += res.stats;
                }
            }
        }
    }
    Ok(MethodComparison {
        plain: median(&mut plain),
        squeezed: median(&mut squeezed),
        rounds,
        plain_stats: ps,
        squeezed_stats: ss,
    })
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
