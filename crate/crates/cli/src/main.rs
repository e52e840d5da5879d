//! `fhei-sim`: runs the allocation experiments and writes CSV tables.
//!
//! Failures print one JSON object on stderr,
//! `{"error": "<Kind>", "message": "..."}`, and exit with status 1
//! (status 2 for command-line usage errors).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fhei::profile::ProfileFile;
use fhei::sim::{self, ExperimentConfig, Mode};
use fhei::Error;

#[derive(Parser)]
#[command(name = "fhei-sim", version, about = "Feature-hierarchical edge inference allocation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-mobile allocation of every method on one channel draw.
    Fig4a(RunArgs),
    /// Sum quality against the number of mobiles over random draws.
    Fig4b(RunArgs),
    /// Every method on one instance.
    Single(RunArgs),
    /// The joint solver against the brute-force grid (at most two mobiles).
    Oracle(RunArgs),
    /// Fits a cost model file from a layer-spec file.
    Fit(FitArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (TOML); built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the number of channel draws per mobile count.
    #[arg(long)]
    trials: Option<usize>,
    /// Output CSV; stdout when neither this nor the config names one.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Adds the full allocation of every row.
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct FitArgs {
    /// Layer-spec file (TOML).
    #[arg(long)]
    profile: PathBuf,
    /// Model file to write; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn resolve(mode: Mode, args: &RunArgs) -> Result<ExperimentConfig, Error> {
    let mut config = match &args.config {
        Some(path) => sim::load_config(path)?,
        None => ExperimentConfig::default(),
    };
    config.mode = mode;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    if let Some(out) = &args.out {
        config.output = Some(out.clone());
    }
    config.validate()?;
    Ok(config)
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(Error::from),
    }
}

fn run_experiment(mode: Mode, args: &RunArgs) -> Result<(), Error> {
    let config = resolve(mode, args)?;
    let rows = sim::run(&config, args.verbose)?;
    let preamble = sim::preamble(&config);
    match &config.output {
        Some(path) => sim::emit_csv(&rows, path, &preamble),
        None => write_text(None, &sim::to_csv_string(&rows, &preamble)?),
    }
}

fn fit(args: &FitArgs) -> Result<(), Error> {
    let model = ProfileFile::load(&args.profile)?.fit()?;
    write_text(args.out.as_deref(), &model.to_toml_string())
}

fn error_line(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": kind, "message": message }).to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or_default().trim_start_matches("error: ");
            eprintln!("{}", error_line("UsageError", first));
            return ExitCode::from(2);
        }
    };
    let outcome = match &cli.command {
        Command::Fig4a(a) => run_experiment(Mode::Fig4a, a),
        Command::Fig4b(a) => run_experiment(Mode::Fig4b, a),
        Command::Single(a) => run_experiment(Mode::Single, a),
        Command::Oracle(a) => run_experiment(Mode::Oracle, a),
        Command::Fit(a) => fit(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", error_line(e.kind(), &e.to_string()));
            ExitCode::FAILURE
        }
    }
}
