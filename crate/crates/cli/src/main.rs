use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use skolem_cli::commands::{self, exit};
use skolem_cli::{CommandError, ProblemInstance, ResultDocument, RunOptions};
use skolem_core::{Lrs, VerifyConfig};

/// Finds every zero of an integer linear recurrence up to a bound.
///
/// Reads one JSON instance, such as
/// {"order":3,"coeffs":["1","-3","2"],"initial":["-1","1","7"],"bound":"200"},
/// from standard input or --file and writes one JSON result to standard output.
/// Exit codes: 0 no zero, 10 zero found, 2 malformed input, 3 oracle cap
/// exceeded, 1 any other failure.
#[derive(Parser)]
#[command(name = "skolem", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the zero set and decide whether a zero exists.
    Decide(SolveArgs),
    /// List candidate zeros without verifying them.
    Candidates(SolveArgs),
    /// Brute-force zeros by direct iteration (small bounds only).
    Oracle(InputArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Read the instance from this file instead of standard input.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Include wall-clock timings in the output.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Seed for prime sampling; random (and reported) when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Each reported zero is wrong with probability at most 2^-kappa.
    #[arg(long, default_value_t = skolem_core::verify::DEFAULT_ERROR_EXPONENT,
          value_parser = clap::value_parser!(u32).range(1..))]
    kappa: u32,
    /// Replace the derived p-adic precision. For testing only: too small a
    /// value makes the search fail.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    nu_override: Option<u64>,
    /// Include every visited disc in the output.
    #[arg(long)]
    trace: bool,
    /// Evaluate terms with index up to this value exactly.
    #[arg(long, default_value_t = skolem_core::verify::DEFAULT_MAX_EXACT)]
    max_exact: u64,
    /// Always run the disc search, even when a direct scan would be cheaper.
    #[arg(long)]
    no_fallback: bool,
}

impl SolveArgs {
    fn options(&self) -> RunOptions {
        RunOptions {
            verify: VerifyConfig {
                error_exponent: self.kappa,
                seed: self.seed.unwrap_or_else(rand::random),
                max_exact: self.max_exact,
            },
            nu_override: self.nu_override,
            trace: self.trace,
            timings: self.input.timings,
            small_n_fallback: !self.no_fallback,
        }
    }
}

fn read_instance(args: &InputArgs) -> Result<(Lrs, BigUint), CommandError> {
    let text = match &args.file {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CommandError::malformed(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut buf = String::new();
            io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CommandError::malformed(format!("cannot read standard input: {e}")))?;
            buf
        }
    };
    let instance: ProblemInstance =
        serde_json::from_str(&text).map_err(|e| CommandError::malformed(format!("invalid instance: {e}")))?;
    instance
        .to_problem()
        .map_err(|e| CommandError::malformed(format!("invalid instance: {e}")))
}

fn run(cli: &Cli) -> Result<(ResultDocument, i32), CommandError> {
    match &cli.command {
        Command::Decide(args) => {
            let (u, n) = read_instance(&args.input)?;
            commands::decide(&u, &n, &args.options())
        }
        Command::Candidates(args) => {
            let (u, n) = read_instance(&args.input)?;
            commands::candidates(&u, &n, &args.options()).map(|doc| (doc, exit::NO_ZERO))
        }
        Command::Oracle(args) => {
            let (u, n) = read_instance(args)?;
            let opts = RunOptions {
                timings: args.timings,
                ..RunOptions::default()
            };
            commands::oracle(&u, &n, &opts)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((doc, code)) => {
            let mut out = io::stdout().lock();
            let written = serde_json::to_writer_pretty(&mut out, &doc)
                .map_err(io::Error::from)
                .and_then(|_| writeln!(out));
            if let Err(e) = written {
                eprintln!("skolem: cannot write result: {e}");
                return ExitCode::from(exit::FAILURE as u8);
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("skolem: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
