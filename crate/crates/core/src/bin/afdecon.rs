use afdecon::cli::{cmd_bench_rate, cmd_estimate, cmd_report, cmd_simulate, cmd_verify, RunConfig};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(version, about = "Deconvolution of functional data under long-range dependence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one observation set.
    Simulate(Common),
    /// Estimate from observations (simulated from the seed unless --input is given).
    Estimate {
        #[command(flatten)]
        common: Common,
        /// Observation file, `.csv` or `.afdc`.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Run the quadrature, moment and tail checks.
    VerifyLemmas(Common),
    /// Run the convergence-rate ladder.
    BenchRate(Common),
    /// Classify the rate regime and compare with a previous bench-rate run.
    Report(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads, 0 for all cores.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn resolve(&self) -> afdecon::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(t) = self.threads {
            cfg.threads = t;
        }
        if let Some(o) = &self.out {
            cfg.out = o.clone();
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> afdecon::Result<String> {
    let (common, action): (&Common, fn(&RunConfig) -> afdecon::Result<String>) = match &cli.command {
        Command::Simulate(c) => (c, cmd_simulate),
        Command::Estimate { common, .. } => (common, cmd_estimate),
        Command::VerifyLemmas(c) => (c, cmd_verify),
        Command::BenchRate(c) => (c, cmd_bench_rate),
        Command::Report(c) => (c, cmd_report),
    };
    let mut cfg = common.resolve()?;
    if let Command::Estimate { input: Some(p), .. } = &cli.command {
        cfg.sample.input = Some(p.clone());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| afdecon::Error::InvalidParameter { name: "threads", reason: e.to_string() })?;
    pool.install(|| action(&cfg))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(summary) => {
            print!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
