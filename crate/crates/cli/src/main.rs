use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use mpk_cli::{input, run, tolerance_from_env, CliError, Command, Options, TOL_ENV};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Diagonalize,
    Spectrum,
    Jordan,
    SolveOde,
    Represent,
    Verify,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Diagonalize => Command::Diagonalize,
            Cmd::Spectrum => Command::Spectrum,
            Cmd::Jordan => Command::Jordan,
            Cmd::SolveOde => Command::SolveOde,
            Cmd::Represent => Command::Represent,
            Cmd::Verify => Command::Verify,
        }
    }
}

/// Exact spectral analysis of matrix polynomials.
///
/// Reads a JSON matrix polynomial and writes a JSON document to stdout.
/// Diagnostics go to stderr. Set MPK_NUMERIC_TOL to change the tolerance
/// used for eigenvalues outside ℚ(i).
#[derive(Debug, Parser)]
#[command(name = "mpk", version)]
struct Cli {
    command: Cmd,
    file: String,
    /// Add LaTeX renderings to the output.
    #[arg(long)]
    latex: bool,
    /// Re-run the residual check on every ODE solution term.
    #[arg(long)]
    verify: bool,
    /// Accept eigenvalues that are only known numerically.
    #[arg(long)]
    allow_numeric_roots: bool,
}

fn execute(cli: &Cli) -> Result<mpk_cli::Report, CliError> {
    let tol = tolerance_from_env(std::env::var(TOL_ENV).ok().as_deref())?;
    let opts = Options { latex: cli.latex, verify: cli.verify, allow_numeric_roots: cli.allow_numeric_roots, tol };
    let (doc, l) = input::load(&cli.file)?;
    run(cli.command.into(), doc.name, &l, &opts)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let json = serde_json::to_string_pretty(&report.document).expect("documents serialize");
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{json}");
            match report.failure {
                Some(e) => {
                    eprintln!("mpk: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("mpk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
