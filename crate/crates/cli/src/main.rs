//! `besselexp`: sampling, tuning inspection, Gibbs inference, efficiency
//! sweeps, verification and benchmarks for the Bessel exponential
//! distribution.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric
//! error.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use besselexp::validation::{
    efficiency_sweep, sig9, throughput_bench, verify, BenchScenario, SweepConfig, VerifyConfig,
};
use besselexp::{
    approx_tune, expected_acceptance, gibbs_sample, oracle_tune, read_angles, ConjugatePrior, Envelope, GibbsConfig,
    KappaSampler, Method, PosteriorParams, RngStream, SampleStats, WMode,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "besselexp",
    version,
    about = "Exact sampling from the Bessel exponential distribution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw κ values for one (η, β0).
    Sample(SampleArgs),
    /// Print the tuned envelope and its expected acceptance.
    Tune(TuneArgs),
    /// Gibbs sampler for (μ, κ) given angle data.
    Gibbs(GibbsArgs),
    /// Expected acceptance across a β0 grid, one CSV per η.
    Efficiency(EfficiencyArgs),
    /// Exactness, acceptance, equivalence and efficiency checks plus the
    /// closed-form claims report.
    Verify(VerifyArgs),
    /// Throughput of the plain and squeezed loops.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Args)]
struct Target {
    #[arg(long, allow_hyphen_values = true)]
    eta: f64,
    #[arg(long, allow_hyphen_values = true)]
    beta0: f64,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = Method::Squeezed)]
    method: Method,
    #[arg(long, default_value_t = WMode::Winitzki)]
    w_mode: WMode,
    /// Output file, written atomically; standard output if absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    target: Target,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct TuneArgs {
    #[command(flatten)]
    target: Target,
    #[arg(long, default_value_t = WMode::Winitzki)]
    w_mode: WMode,
    /// Also tune numerically for the best possible envelope.
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct GibbsArgs {
    /// Angle file: one value per line, `#` comments allowed.
    #[arg(long)]
    data: PathBuf,
    /// Read the data in degrees instead of radians.
    #[arg(long)]
    degrees: bool,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    b: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    mu0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    r0: f64,
    /// Total iterations, burn-in included.
    #[arg(long, default_value_t = 2000)]
    iters: usize,
    #[arg(long, default_value_t = 500)]
    burn_in: usize,
    #[arg(long, default_value_t = 1.0)]
    init_kappa: f64,
    /// Print posterior summaries to standard error.
    #[arg(long)]
    summary: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EfficiencyArgs {
    #[arg(long, value_delimiter = ',', default_value = "1,10,100")]
    etas: Vec<f64>,
    #[arg(long, default_value_t = 200, conflicts_with = "full")]
    grid: usize,
    /// Use the 2000-point grid.
    #[arg(long)]
    full: bool,
    /// Also measure the acceptance rate with this many proposals per point.
    #[arg(long)]
    empirical: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = WMode::Winitzki)]
    w_mode: WMode,
    /// A file for one η; a directory receiving `eff{eta}.csv` files otherwise.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 200)]
    grid: usize,
    /// Draws per exactness case.
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 10.0)]
    eta: f64,
    /// Fixed β0; without it β0 ~ Uniform(−1, 1) is redrawn and retuned
    /// every `--retune-every` draws.
    #[arg(long, allow_hyphen_values = true)]
    beta0: Option<f64>,
    #[arg(long, default_value_t = 100)]
    retune_every: usize,
    #[arg(long, default_value_t = 2.0)]
    seconds: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// One loop only; both by default.
    #[arg(long)]
    method: Option<Method>,
    #[arg(long, default_value_t = WMode::Winitzki)]
    w_mode: WMode,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

enum Failure {
    /// Verification ran and found a problem.
    Check,
    Usage(String),
    Numeric(String),
}

impl From<besselexp::Error> for Failure {
    fn from(e: besselexp::Error) -> Self {
        use besselexp::Error as E;
        match e {
            E::Domain { .. } | E::InvalidParams { .. } | E::InvalidPosterior(_) | E::InvalidArgument(_) => {
                Failure::Usage(e.to_string())
            }
            E::Divergent(_) | E::Numeric { .. } | E::IterationCap { .. } => Failure::Numeric(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

type CliResult<T = ()> = Result<T, Failure>;

/// Standard output, or a temporary file renamed over the target on commit.
enum Sink {
    Stdout(BufWriter<io::Stdout>),
    File {
        writer: BufWriter<tempfile::NamedTempFile>,
        path: PathBuf,
    },
}

impl Sink {
    fn open(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Sink::Stdout(BufWriter::new(io::stdout())));
        };
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_failure(path, e))?;
        Ok(Sink::File {
            writer: BufWriter::new(tmp),
            path: path.to_path_buf(),
        })
    }

    fn writer(&mut self) -> &mut dyn Write {
        match self {
            Sink::Stdout(w) => w,
            Sink::File { writer, .. } => writer,
        }
    }

    fn commit(self) -> CliResult {
        match self {
            Sink::Stdout(mut w) => w.flush().map_err(|e| io_failure(Path::new("<stdout>"), e)),
            Sink::File { writer, path } => {
                let tmp = writer.into_inner().map_err(|e| io_failure(&path, e.into_error()))?;
                tmp.persist(&path).map_err(|e| io_failure(&path, e.error))?;
                Ok(())
            }
        }
    }
}

/// Writes through `f` and commits only if every write succeeded.
fn emit(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> CliResult {
    let mut sink = Sink::open(path)?;
    let shown = path.unwrap_or(Path::new("<stdout>")).to_path_buf();
    f(sink.writer()).map_err(|e| io_failure(&shown, e))?;
    sink.commit()
}

fn positive(name: &str, x: f64) -> CliResult<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Failure::Usage(format!("--{name} must be a positive number, got {x}")))
    }
}

fn stats_json(stats: &SampleStats) -> serde_json::Value {
    json!({ "stats": stats })
}

fn run_sample(args: SampleArgs) -> CliResult {
    let post = PosteriorParams::new(args.target.eta, args.target.beta0)?;
    if args.n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let c = &args.common;
    let sampler = KappaSampler::new(&post, &approx_tune(&post, c.w_mode), c.method);
    let mut rng = RngStream::new(c.seed);
    let mut stats = SampleStats::default();
    let mut failure = None;
    let format = c.format;
    emit(c.output.as_deref(), |w| {
        for i in 0..args.n {
            let kappa = match sampler.sample(&mut rng, &mut stats) {
                Ok(k) => k,
                Err(e) => {
                    failure = Some(e);
                    return Err(io::Error::other("sampling failed"));
                }
            };
            match format {
                Format::Csv => writeln!(w, "{kappa}")?,
                Format::Jsonl => writeln!(w, "{}", json!({ "kappa": kappa, "i": i }))?,
            }
        }
        if format == Format::Jsonl {
            writeln!(w, "{}", stats_json(&stats))?;
        }
        Ok(())
    })
    .map_err(|e| failure.map_or(e, Failure::from))
}

fn envelope_fields(post: &PosteriorParams, env: &Envelope) -> CliResult<Vec<(&'static str, f64)>> {
    Ok(vec![
        ("kappa0", env.kappa0),
        ("alpha", env.alpha),
        ("beta", env.beta),
        ("epsilon", env.epsilon),
        ("log_epsilon", env.log_epsilon),
        ("proposal_shape", env.proposal_shape(post)),
        ("proposal_rate", env.proposal_rate(post)),
        ("log_i0_kappa0", env.log_i0_kappa0),
        ("g_kappa0", env.g_at_kappa0),
        ("g_zero", env.g_at_zero),
        ("threshold", env.threshold()),
        ("expected_acceptance", expected_acceptance(post, env)?),
    ])
}

fn run_tune(args: TuneArgs) -> CliResult {
    let post = PosteriorParams::new(args.target.eta, args.target.beta0)?;
    let mut tunings = vec![("approx", envelope_fields(&post, &approx_tune(&post, args.w_mode))?)];
    if args.oracle {
        tunings.push(("oracle", envelope_fields(&post, &oracle_tune(&post)?)?));
    }
    emit(None, |w| {
        for (name, fields) in &tunings {
            match args.format {
                Format::Csv => {
                    writeln!(w, "tuning {name}")?;
                    writeln!(w, "eta {}", post.eta())?;
                    writeln!(w, "beta0 {}", post.beta0())?;
                    if *name == "approx" {
                        writeln!(w, "w_mode {}", args.w_mode)?;
                    }
                    for (k, v) in fields {
                        writeln!(w, "{k} {v}")?;
                    }
                }
                Format::Jsonl => {
                    let mut obj = serde_json::Map::new();
                    obj.insert("tuning".into(), json!(name));
                    obj.insert("eta".into(), json!(post.eta()));
                    obj.insert("beta0".into(), json!(post.beta0()));
                    if *name == "approx" {
                        obj.insert("w_mode".into(), json!(args.w_mode));
                    }
                    for (k, v) in fields {
                        obj.insert((*k).into(), json!(v));
                    }
                    writeln!(w, "{}", serde_json::Value::Object(obj))?;
                }
            }
        }
        Ok(())
    })
}

fn run_gibbs(args: GibbsArgs) -> CliResult {
    let prior = ConjugatePrior {
        a: args.a,
        b: args.b,
        mu0: args.mu0,
        r0: args.r0,
    };
    prior.validate()?;
    positive("init-kappa", args.init_kappa)?;
    if args.iters <= args.burn_in {
        return Err(Failure::Usage(format!(
            "--iters ({}) must exceed --burn-in ({})",
            args.iters, args.burn_in
        )));
    }
    let text = fs::read_to_string(&args.data).map_err(|e| io_failure(&args.data, e))?;
    let angles = read_angles(&text, args.degrees)?;
    let c = &args.common;
    let config = GibbsConfig {
        iters: args.iters,
        burn_in: args.burn_in,
        init_kappa: args.init_kappa,
        method: c.method,
        w_mode: c.w_mode,
    };
    let chain = gibbs_sample(&angles, &prior, &config, &mut RngStream::new(c.seed))?;
    emit(c.output.as_deref(), |w| {
        if c.format == Format::Csv {
            writeln!(w, "mu,kappa")?;
        }
        for (i, (mu, kappa)) in chain.draws.iter().enumerate() {
            match c.format {
                Format::Csv => writeln!(w, "{mu},{kappa}")?,
                Format::Jsonl => writeln!(w, "{}", json!({ "mu": mu, "kappa": kappa, "i": i }))?,
            }
        }
        if c.format == Format::Jsonl {
            writeln!(w, "{}", stats_json(&chain.stats))?;
        }
        Ok(())
    })?;
    if args.summary {
        eprintln!(
            "n = {}, draws = {}\nmu: mean {} sd {}\nkappa: mean {} (se {}) sd {}, 95% interval [{}, {}]\nacceptance {}",
            angles.len(),
            chain.len(),
            sig9(chain.mu_mean()),
            sig9(chain.mu_sd()),
            sig9(chain.kappa_mean()),
            sig9(chain.kappa_mean_se()),
            sig9(chain.kappa_sd()),
            sig9(chain.kappa_quantile(0.025)),
            sig9(chain.kappa_quantile(0.975)),
            sig9(chain.stats.acceptance_rate()),
        );
    }
    Ok(())
}

fn run_efficiency(args: EfficiencyArgs) -> CliResult {
    for &eta in &args.etas {
        positive("etas", eta)?;
    }
    let config = SweepConfig {
        etas: args.etas.clone(),
        grid: if args.full { 2000 } else { args.grid },
        w_mode: args.w_mode,
        empirical: args.empirical,
        seed: args.seed,
        jobs: args.jobs,
    };
    // Validate the output location before the sweep runs.
    let dir = match &args.output {
        Some(p) if args.etas.len() > 1 || p.is_dir() => {
            fs::create_dir_all(p).map_err(|e| io_failure(p, e))?;
            Some(p.clone())
        }
        _ => None,
    };
    let curves = efficiency_sweep(&config)?;
    match (&args.output, dir) {
        (_, Some(dir)) => {
            for c in &curves {
                emit(Some(&dir.join(format!("eff{}.csv", c.eta))), |w| c.write_csv(w))?;
            }
            Ok(())
        }
        (Some(file), None) => emit(Some(file), |w| curves[0].write_csv(w)),
        (None, None) => emit(None, |w| {
            for c in &curves {
                if curves.len() > 1 {
                    writeln!(w, "# eta = {}", c.eta)?;
                }
                c.write_csv(&mut *w)?;
            }
            Ok(())
        }),
    }
}

fn run_verify(args: VerifyArgs) -> CliResult {
    let config = VerifyConfig {
        grid: args.grid,
        n: args.n,
        seed: args.seed,
    };
    let report = verify(&config)?;
    emit(args.report.as_deref(), |w| match args.format {
        Format::Csv => w.write_all(report.render().as_bytes()),
        Format::Jsonl => writeln!(w, "{}", json!(report)),
    })?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn run_bench(args: BenchArgs) -> CliResult {
    positive("eta", args.eta)?;
    let scenario = match args.beta0 {
        Some(b0) => BenchScenario::Fixed(PosteriorParams::new(args.eta, b0)?),
        None => BenchScenario::Retuned {
            eta: args.eta,
            every: args.retune_every,
        },
    };
    let methods = match args.method {
        Some(m) => vec![m],
        None => Method::ALL.to_vec(),
    };
    let mut results = Vec::new();
    for m in methods {
        results.push(throughput_bench(
            scenario,
            m,
            args.w_mode,
            args.seconds,
            &mut RngStream::new(args.seed),
        )?);
    }
    emit(None, |w| {
        if args.format == Format::Csv {
            writeln!(
                w,
                "method,draws,seconds,samples_per_second,acceptance,squeeze_hit_rate,bessel_fraction"
            )?;
        }
        for r in &results {
            match args.format {
                Format::Csv => writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    r.method,
                    r.draws,
                    sig9(r.seconds),
                    sig9(r.samples_per_second),
                    sig9(r.stats.acceptance_rate()),
                    sig9(r.squeeze_hit_rate()),
                    sig9(r.stats.bessel_fraction())
                )?,
                Format::Jsonl => writeln!(w, "{}", json!(r))?,
            }
        }
        Ok(())
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Sample(a) => run_sample(a),
        Command::Tune(a) => run_tune(a),
        Command::Gibbs(a) => run_gibbs(a),
        Command::Efficiency(a) => run_efficiency(a),
        Command::Verify(a) => run_verify(a),
        Command::Bench(a) => run_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => {
            eprintln!("besselexp: verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("besselexp: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("besselexp: numeric error: {msg}");
            ExitCode::from(3)
        }
    }
}
