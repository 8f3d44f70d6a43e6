mod commands;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "hankeldet", version, about = "Hankel and Wiener-Hopf determinants")]
pub struct Cli {
    /// JSON configuration file for the subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = hankeldet::verify::DEFAULT_TOL)]
    pub tol: f64,
    /// Quadrature node count.
    #[arg(long, global = true, default_value_t = hankeldet::verify::DEFAULT_NODES)]
    pub nodes: usize,
    /// Write the result here instead of stdout; a .csv path selects CSV
    /// where the command supports it.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Restrict `verify` to one module.
    #[arg(long, global = true)]
    pub only: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Wiener-Hopf factorization of a symbol.
    Factorize,
    /// Determinant identity: symbol mode or exponential-expansion mode.
    Det,
    /// Residue expansions of the two scattering functions.
    Barnes,
    /// Moments of a weight.
    Moments,
    /// Orthogonal polynomial ladder, Hankel determinant and kernel data.
    Ortho,
    /// Struve-type Hankel determinant against the n-fold integral.
    Struve,
    /// Equilibrium density of an external field.
    Equilibrium,
    /// Run the verification suite.
    Verify,
}

/// Ways a command can fail, each with its own exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Lib(hankeldet::Error),
    Verify(Vec<String>),
}

impl From<hankeldet::Error> for Failure {
    fn from(e: hankeldet::Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        use hankeldet::Error;
        match self {
            Failure::Usage(_) => 1,
            Failure::Lib(Error::InvalidInput(_) | Error::Length { .. }) => 1,
            Failure::Lib(e) if e.is_hypothesis() => 2,
            Failure::Lib(_) => 3,
            Failure::Verify(_) => 4,
        }
    }
}

/// A command's result: JSON, optionally with a CSV rendering.
pub struct Output {
    pub json: serde_json::Value,
    pub csv: Option<String>,
}

fn emit(cli: &Cli, out: &Output) -> Result<(), Failure> {
    let text = match (&cli.output, &out.csv) {
        (Some(p), Some(csv)) if p.extension().is_some_and(|e| e == "csv") => csv.clone(),
        _ => format!("{}\n", serde_json::to_string_pretty(&out.json).unwrap_or_default()),
    };
    match &cli.output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = commands::run(&cli).and_then(|out| {
        emit(&cli, &out)?;
        match out.json.get("failing").and_then(|f| f.as_array()) {
            Some(f) if !f.is_empty() => Err(Failure::Verify(
                f.iter().filter_map(|v| v.as_str().map(String::from)).collect(),
            )),
            _ => Ok(()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Lib(e) if e.is_hypothesis() => eprintln!("hypothesis violated: {e}"),
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Verify(names) => eprintln!("verification failed: {}", names.join("; ")),
            }
            ExitCode::from(f.code())
        }
    }
}
