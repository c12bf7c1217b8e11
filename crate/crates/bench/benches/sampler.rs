use std::hint::black_box;

use besselexp::validation::{time_fixed_workload, BenchScenario};
use besselexp::{approx_tune, bessel_eval, oracle_tune, KappaSampler, Method, RngStream, SampleStats, WMode};
use besselexp_bench::{label, posterior, POINTS};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

fn bessel(c: &mut Criterion) {
    let mut g = c.benchmark_group("bessel_eval");
    for kappa in [0.1, 2.0, 14.0, 40.0, 1e4] {
        g.bench_with_input(BenchmarkId::from_parameter(kappa), &kappa, |b, &k| {
            b.iter(|| bessel_eval(black_box(k)))
        });
    }
    g.finish();
}

fn tuning(c: &mut Criterion) {
    let mut g = c.benchmark_group("tune");
    for (eta, b0) in POINTS {
        let post = posterior(eta, b0);
        for w in WMode::ALL {
            g.bench_with_input(
                BenchmarkId::new(format!("approx_{w}"), label(eta, b0)),
                &post,
                |b, p| b.iter(|| approx_tune(black_box(p), w)),
            );
        }
    }
    g.sample_size(10);
    let post = posterior(10.0, 0.0);
    g.bench_function("oracle/eta=10/beta0=0", |b| b.iter(|| oracle_tune(black_box(&post))));
    g.finish();
}

fn draws(c: &mut Criterion) {
    let mut g = c.benchmark_group("draw");
    g.throughput(Throughput::Elements(1));
    for (eta, b0) in POINTS {
        let post = posterior(eta, b0);
        let env = approx_tune(&post, WMode::Winitzki);
        for m in Method::ALL {
            let sampler = KappaSampler::new(&post, &env, m);
            let mut rng = RngStream::new(1);
            let mut stats = SampleStats::default();
            g.bench_function(BenchmarkId::new(m.to_string(), label(eta, b0)), |b| {
                b.iter(|| sampler.sample(&mut rng, &mut stats).unwrap())
            });
        }
    }
    g.finish();
}

// β0 ~ Uniform(−1, 1) redrawn and retuned every 100 draws, as inside a
// Gibbs sweep.
fn retuned(c: &mut Criterion) {
    let mut g = c.benchmark_group("retuned_eta10");
    const DRAWS: u64 = 10_000;
    g.throughput(Throughput::Elements(DRAWS));
    let scenario = BenchScenario::Retuned { eta: 10.0, every: 100 };
    for m in Method::ALL {
        g.bench_function(m.to_string(), |b| {
            b.iter(|| time_fixed_workload(scenario, m, WMode::Winitzki, DRAWS, 7).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bessel, tuning, draws, retuned);
criterion_main!(benches);
