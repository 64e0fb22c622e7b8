use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use tsallis_sim::{curves, oracle, output, run_batch, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "tsallis-inf",
    version,
    about = "Tsallis-INF bandit experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every algorithm of a config and write regret CSVs.
    Run(Common),
    /// Check the weight solvers and loss estimators against reference computations.
    OracleCheck(Common),
    /// Write the reference regret bounds for a config.
    Bounds(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config's base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; TSALLIS_THREADS takes precedence.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> anyhow::Result<(ExperimentConfig, String)> {
        let Some(path) = &self.config else {
            bail!("--config is required");
        };
        let mut config =
            ExperimentConfig::load(path).with_context(|| format!("loading {}", path.display()))?;
        if let Some(seed) = self.seed {
            config.base_seed = seed;
        }
        Ok((config, stem(path)))
    }

    fn threads(&self) -> anyhow::Result<Option<usize>> {
        match std::env::var("TSALLIS_THREADS") {
            Ok(v) => Ok(Some(
                v.parse().with_context(|| format!("TSALLIS_THREADS={v}"))?,
            )),
            Err(_) => Ok(self.threads),
        }
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "experiment".into(), |s| s.to_string_lossy().into_owned())
}

fn run(args: &Common) -> anyhow::Result<bool> {
    let (config, stem) = args.load()?;
    let result = run_batch(&config, args.threads()?)?;
    let dir = args
        .out
        .clone()
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let files = output::write_batch(&dir, &stem, &config, &result)?;
    for f in &result.failures {
        eprintln!("warning: {f}");
    }
    println!("{}", files.raw.display());
    println!("{}", files.aggregate.display());
    println!("{}", files.metadata.display());
    Ok(!result.reports.is_empty())
}

fn oracle_check(args: &Common) -> anyhow::Result<bool> {
    let seed = match (&args.config, args.seed) {
        (_, Some(s)) => s,
        (Some(_), None) => args.load()?.0.base_seed,
        (None, None) => 0,
    };
    let reports = oracle::all_suites(seed);
    for r in &reports {
        println!("{r}");
    }
    Ok(reports.iter().all(oracle::SuiteReport::passed))
}

fn bounds(args: &Common) -> anyhow::Result<bool> {
    let (config, stem) = args.load()?;
    let rows = curves::reference_curves(&config)?;
    match &args.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(format!("{stem}_bounds.csv"));
            let file = std::fs::File::create(&path)
                .with_context(|| format!("creating {}", path.display()))?;
            output::write_bounds(std::io::BufWriter::new(file), &rows)?;
            println!("{}", path.display());
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            output::write_bounds(&mut lock, &rows)?;
            lock.flush()?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(a) => run(a),
        Command::OracleCheck(a) => oracle_check(a),
        Command::Bounds(a) => bounds(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
