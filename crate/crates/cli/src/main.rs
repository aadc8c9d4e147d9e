use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use bosewalk_core::report::{write_artifacts, CommandRegistry, OutputFormat, RunConfig};
use bosewalk_core::Error;
use clap::Parser;
use log::info;

/// Two-boson quantum walks on a periodic Bose-Hubbard ring.
#[derive(Debug, Parser)]
#[command(version, about, after_help = commands_help())]
struct Cli {
    /// Analysis to run.
    command: String,

    /// Ring size; repeat or comma-separate for commands that sweep N.
    #[arg(long = "n", value_delimiter = ',')]
    sites: Vec<usize>,

    /// Hopping amplitude J (> 0). Energies are reported in units of J.
    #[arg(long = "j")]
    hopping: Option<f64>,

    /// On-site interaction V; repeat or comma-separate for a sweep.
    #[arg(long = "v", value_delimiter = ',', allow_hyphen_values = true)]
    interactions: Vec<f64>,

    /// Preset psi1..psi6 or inline terms "i,j[,amp];i,j[,amp]".
    #[arg(long)]
    state: Option<String>,

    #[arg(long)]
    tau_max: Option<f64>,

    #[arg(long)]
    tau_steps: Option<usize>,

    /// Sites of subsystem A, e.g. "1..15". Defaults to the first half.
    #[arg(long)]
    partition: Option<String>,

    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long)]
    format: Option<String>,

    /// Key-value file mirroring the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn commands_help() -> String {
    let registry = CommandRegistry::builtin();
    let mut text = String::from("Commands:\n");
    for c in registry.commands() {
        text.push_str(&format!("  {:<12} {}\n", c.name(), c.about()));
    }
    text
}

fn build_config(cli: Cli) -> Result<RunConfig, Error> {
    let mut config = RunConfig::new(cli.command);
    if let Some(path) = &cli.config {
        config.apply_file(&fs::read_to_string(path)?)?;
    }
    if !cli.sites.is_empty() {
        config.sites = cli.sites;
    }
    if let Some(j) = cli.hopping {
        config.hopping = j;
    }
    if !cli.interactions.is_empty() {
        config.interactions = cli.interactions;
    }
    if cli.state.is_some() {
        config.state = cli.state;
    }
    if let Some(t) = cli.tau_max {
        config.tau_max = t;
    }
    if let Some(s) = cli.tau_steps {
        config.tau_steps = s;
    }
    if cli.partition.is_some() {
        config.partition = cli.partition;
    }
    if let Some(out) = cli.out {
        config.out = out;
    }
    if let Some(f) = cli.format {
        config.format = f.parse::<OutputFormat>()?;
    }
    Ok(config)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidLattice(_) | Error::InvalidPair { .. } | Error::BasisMismatch { .. } => 2,
        Error::SymmetryUndefined(_) => 3,
        Error::NumericalFailure { .. } => 4,
        Error::Io(_) | Error::Json(_) => 5,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let config = build_config(cli)?;
    let artifacts = CommandRegistry::builtin().execute(&config)?;
    for path in write_artifacts(&config.out, &artifacts)? {
        info!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
