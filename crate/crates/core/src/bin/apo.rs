//! Command-line experiment runner.
//!
//! Failures print one JSON line `{"error": <kind>, "message": <text>}` on
//! stderr and exit with status 2 (usage or config) or 1 (anything else).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use apo_core::experiment::{run, run_stats, CommandKind, ConfigLayer, ExperimentConfig};
use apo_core::Error;

#[derive(Parser, Debug)]
#[command(name = "apo", version, about = "Artificial protozoa optimizer experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Unconstrained benchmark functions.
    Bench(RunArgs),
    /// Constrained engineering design problems.
    Engineering(RunArgs),
    /// Multilevel thresholding of a PPM image.
    Segment(RunArgs),
    /// Friedman ranks and Wilcoxon tests over existing results.csv files.
    Stats(StatsArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Algorithms, comma separated (apo, random).
    #[arg(long, value_delimiter = ',')]
    algo: Option<Vec<String>>,
    /// Function or problem names, comma separated.
    #[arg(long = "fn", visible_alias = "problem", value_delimiter = ',')]
    names: Option<Vec<String>>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    ps: Option<usize>,
    #[arg(long)]
    np: Option<usize>,
    #[arg(long = "pfmax")]
    pf_max: Option<f64>,
    /// Evaluation budget, initialization included.
    #[arg(long = "maxfes")]
    max_fes: Option<usize>,
    /// Generations after initialization; the budget becomes ps * (iters + 1).
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    repeats: Option<usize>,
    /// Base seed; repeat k uses seed + k.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    image: Option<PathBuf>,
    /// Threshold counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    thresholds: Option<Vec<usize>>,
    /// JSON object mapping problem names to target objective values.
    #[arg(long)]
    targets: Option<PathBuf>,
    /// Penalty coefficient for constraint violations.
    #[arg(long)]
    lambda: Option<f64>,
    /// Shift/rotation file for the benchmark functions.
    #[arg(long)]
    transform: Option<PathBuf>,
    #[arg(long)]
    bias: Option<f64>,
}

#[derive(Args, Debug)]
struct StatsArgs {
    /// results.csv files written by bench or engineering.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, default_value = "stats")]
    out: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
}

impl RunArgs {
    fn into_layer(self) -> (Option<PathBuf>, ConfigLayer) {
        let layer = ConfigLayer {
            algo: self.algo,
            names: self.names,
            dim: self.dim,
            ps: self.ps,
            np: self.np,
            pf_max: self.pf_max,
            max_fes: self.max_fes,
            iters: self.iters,
            repeats: self.repeats,
            seed: self.seed,
            out: self.out,
            image: self.image,
            thresholds: self.thresholds,
            targets: self.targets,
            penalty_lambda: self.lambda,
            transform: self.transform,
            bias: self.bias,
        };
        (self.config, layer)
    }
}

fn execute(kind: CommandKind, args: RunArgs) -> apo_core::Result<Vec<String>> {
    let (config, flags) = args.into_layer();
    let base = match config {
        Some(path) => ConfigLayer::load(&path)?,
        None => ConfigLayer::default(),
    };
    let cfg = ExperimentConfig::resolve(kind, base.overlay(flags))?;
    run(&cfg)
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    let line = serde_json::json!({ "error": kind, "message": message });
    eprintln!("{line}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.kind().to_string();
            let detail = e.to_string();
            let first = detail.lines().next().unwrap_or(&text).trim_start_matches("error: ");
            return fail("usage", first, 2);
        }
    };
    let result = match cli.command {
        Command::Bench(a) => execute(CommandKind::Bench, a),
        Command::Engineering(a) => execute(CommandKind::Engineering, a),
        Command::Segment(a) => execute(CommandKind::Segment, a),
        Command::Stats(a) => {
            let inputs: Vec<&std::path::Path> = a.inputs.iter().map(PathBuf::as_path).collect();
            run_stats(&inputs, &a.out, a.alpha)
        }
    };
    match result {
        Ok(files) => {
            for f in files {
                println!("{f}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = if matches!(e, Error::Config(_)) { 2 } else { 1 };
            fail(e.kind(), &e.to_string(), code)
        }
    }
}
