use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gempl_cli::{parse_config_with, run_command, write_outputs, CliError};

/// Weak-field gravito-electromagnetism, cavity and parametric-amplifier
/// calculations.
#[derive(Parser, Debug)]
#[command(name = "gempl", version)]
struct Args {
    /// modes | spectrum | ab-phase | threshold | simulate | sweep
    command: String,

    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override a configuration entry, e.g. `--set mass_kg=3e-6`.
    #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_pair)]
    set: Vec<(String, String)>,

    /// Output directory (default: the config's `out`, else `out`).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_pair(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got '{s}'"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn run(args: Args) -> Result<(), CliError> {
    let text = match &args.config {
        Some(p) => std::fs::read_to_string(p).map_err(|source| CliError::Io { path: p.display().to_string(), source })?,
        None => String::new(),
    };
    // precedence: file < environment < --set < positional command
    let mut overrides = Vec::new();
    if let Ok(mode) = std::env::var("GEMPL_CONSTANTS") {
        overrides.push(("constants".to_string(), mode));
    }
    overrides.extend(args.set);
    overrides.push(("command".to_string(), format!("{:?}", args.command)));
    let config = parse_config_with(&text, &overrides)?;
    let envelope = run_command(&config)?;
    let dir = args.out.or_else(|| config.out.clone()).unwrap_or_else(|| PathBuf::from("out"));
    for path in write_outputs(&envelope, &dir)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gempl: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
