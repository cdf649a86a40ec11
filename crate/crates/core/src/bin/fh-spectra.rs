use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fh_core::cli::{run, CliError, Command, RawConfig, RunConfig, EXIT_VERIFICATION};

/// Quantized momentum spectra, potentials and wavefunctions of the
/// Feinberg-Horodecki equation.
#[derive(Parser)]
#[command(name = "fh-spectra", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate V(t)
    Potential(Common),
    /// Tabulate P_0..P_nmax over an alpha sweep
    Spectrum(Common),
    /// Tabulate normalized wavefunctions
    Wavefunction(Common),
    /// Compare the closed form with the finite-difference oracle
    Verify(Common),
}

#[derive(Args)]
struct Common {
    /// key = value configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long)]
    threshold: Option<f64>,
    /// Override any config key, e.g. --set alpha=0.3
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn execute(command: Command, args: Common) -> Result<bool, CliError> {
    let mut raw = match &args.config {
        Some(path) => RawConfig::from_file(path)?,
        None => RawConfig::default(),
    };
    for pair in &args.set {
        raw.set_pair(pair)?;
    }
    if let Some(v) = &args.format {
        raw.set("format", v.clone());
    }
    if let Some(v) = args.nmax {
        raw.set("nmax", v.to_string());
    }
    if let Some(v) = args.threshold {
        raw.set("threshold", v.to_string());
    }
    if let Some(v) = &args.out {
        raw.set("out", v.to_string_lossy());
    }
    let cfg = RunConfig::from_raw(&raw)?;
    let output = run(command, &cfg)?;
    for w in &output.table.warnings {
        eprintln!("warning: {w}");
    }
    match &cfg.out {
        Some(path) => std::fs::write(path, &output.rendered)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{}", output.rendered),
    }
    Ok(output.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Potential(a) => (Command::Potential, a),
        Cmd::Spectrum(a) => (Command::Spectrum, a),
        Cmd::Wavefunction(a) => (Command::Wavefunction, a),
        Cmd::Verify(a) => (Command::Verify, a),
    };
    match execute(command, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: verification failed");
            ExitCode::from(EXIT_VERIFICATION as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
