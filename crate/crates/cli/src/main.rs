//! Command-line front end: coefficient tables, summation, factorial series,
//! remainder bounds, the Bessel comparison harness and the oscillator.

mod commands;
mod output;

use borel_wkb::{Sign, WkbError, C64};
use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{write_output, Format};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "borel-wkb", version, about = "Resummed WKB expansions with explicit remainder bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients A_n as polynomials in p or as values at points z.
    Coeffs(commands::CoeffsArgs),
    /// Borel-Pade-Laplace sum of the correction series.
    Sum(commands::SumArgs),
    /// Partial sums of the factorial series with certified tail bounds.
    Factorial(commands::FactorialArgs),
    /// Remainder bounds of the truncated asymptotic series for N = 1..n_max.
    Bounds(commands::BoundsArgs),
    /// Hankel functions from the truncated series against the reference values.
    BesselCompare(commands::CompareArgs),
    /// Solutions of the radial oscillator with their ODE residuals.
    Oscillator(commands::OscillatorArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum App {
    Bessel,
    Oscillator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct EquationArgs {
    #[arg(long, value_enum, default_value = "bessel")]
    pub app: App,
    /// Order shift of the Bessel equation (complex, e.g. 0.5 or 0.3+0.1i).
    #[arg(long, default_value = "0")]
    pub kappa: C64,
    /// Energy parameter of the oscillator.
    #[arg(long, default_value = "0")]
    pub lambda: C64,
    /// Angular momentum of the oscillator.
    #[arg(long, default_value_t = 0)]
    pub ell: u32,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file, written atomically; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Ways a run can fail, each with its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Rejected configuration (exit 2).
    Config(String),
    /// Numerical failure inside a computation (exit 3).
    Numerical(String),
}

impl From<WkbError> for Failure {
    fn from(e: WkbError) -> Failure {
        match e {
            WkbError::Invalid(_) | WkbError::ParameterOrder(_) | WkbError::Domain(_) => Failure::Config(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

/// A finished run: the table, a one-line summary, and a violation message
/// when a bound was breached.
pub struct Outcome {
    pub table: output::Table,
    pub summary: String,
    pub violation: Option<String>,
}

fn thread_pool() -> Result<(), Failure> {
    let Ok(v) = std::env::var("BOREL_WKB_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| Failure::Config(format!("BOREL_WKB_THREADS must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<(Outcome, OutputArgs, Format), Failure> {
    thread_pool()?;
    let (outcome, out, default) = match cli.command {
        Command::Coeffs(a) => (commands::coeffs(&a)?, a.output, Format::Json),
        Command::Sum(a) => (commands::sum(&a)?, a.output, Format::Csv),
        Command::Factorial(a) => (commands::factorial(&a)?, a.output, Format::Csv),
        Command::Bounds(a) => (commands::bounds(&a)?, a.output, Format::Csv),
        Command::BesselCompare(a) => (commands::compare(&a)?, a.output, Format::Csv),
        Command::Oscillator(a) => (commands::oscillator(&a)?, a.output, Format::Csv),
    };
    let format = out.format.unwrap_or(default);
    Ok((outcome, out, format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((outcome, out, format)) => {
            let bytes = match outcome.table.render(format) {
                Ok(b) => b,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(3);
                }
            };
            if let Err(e) = write_output(&bytes, out.out.as_deref()) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(3);
            }
            eprintln!("{}", outcome.summary);
            match outcome.violation {
                Some(v) => {
                    eprintln!("bound violated: {v}");
                    ExitCode::from(4)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
