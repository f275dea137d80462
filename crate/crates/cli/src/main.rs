use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use mtsim_cli::{execute, parse_scenario, schema, CliError, Subcommand};

/// Run a simulation scenario and write CSV/JSON artifacts.
#[derive(Parser, Debug)]
#[command(name = "mtsim", version, about)]
struct Args {
    /// kink | evolve | decohere | trajectories | growth | blackhole |
    /// collapse-time | tdva | flow
    #[arg(value_parser = parse_sub, required_unless_present = "print_schema")]
    subcommand: Option<Subcommand>,

    /// Scenario file of `key = value` lines
    #[arg(long, required_unless_present = "print_schema")]
    config: Option<PathBuf>,

    /// Overrides the scenario seed
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory (default: the scenario's output_dir, else ./mtsim-out)
    #[arg(long)]
    out: Option<PathBuf>,

    /// List the keys a subcommand accepts and exit
    #[arg(long, value_parser = parse_sub, value_name = "SUBCOMMAND", conflicts_with_all = ["subcommand", "config"])]
    print_schema: Option<Subcommand>,
}

fn parse_sub(s: &str) -> Result<Subcommand, String> {
    s.parse()
}

fn threads() -> Result<Option<usize>, CliError> {
    match std::env::var("MTSIM_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| CliError::Invalid(format!("MTSIM_THREADS must be a positive integer, got `{v}`"))),
    }
}

fn run(args: Args) -> Result<(), CliError> {
    if let Some(sub) = args.print_schema {
        print!("{}", schema::render(sub));
        return Ok(());
    }
    let path = args.config.expect("clap enforces --config");
    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io { path: path.clone(), source })?;
    let mut scenario = parse_scenario(&text, args.subcommand)?;
    if let Some(seed) = args.seed {
        scenario.seed = seed;
    }
    let out = args
        .out
        .or_else(|| scenario.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("mtsim-out"));
    let manifest = execute(&scenario, &out, threads()?)?;
    println!(
        "{}: wrote {} files to {} in {:.3} s",
        manifest.subcommand,
        manifest.files.len() + 1,
        out.display(),
        manifest.wall_time_s
    );
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mtsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
