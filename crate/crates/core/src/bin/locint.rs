use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use locint::cli::{exit_code, run, Command, RunOptions};
use locint::Error;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Resonance,
    Curve,
    CheckNonisolated,
    Straighten,
    Integral,
    Nonint,
    Counterexample,
    CertifyDivergence,
    Verify,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Command {
        match c {
            Cmd::Resonance => Command::Resonance,
            Cmd::Curve => Command::Curve,
            Cmd::CheckNonisolated => Command::CheckNonisolated,
            Cmd::Straighten => Command::Straighten,
            Cmd::Integral => Command::Integral,
            Cmd::Nonint => Command::Nonint,
            Cmd::Counterexample => Command::Counterexample,
            Cmd::CertifyDivergence => Command::CertifyDivergence,
            Cmd::Verify => Command::Verify,
        }
    }
}

/// Local first integrals at a singular point with one zero eigenvalue.
#[derive(Parser, Debug)]
#[command(name = "locint", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// System file (optional for counterexample and certify-divergence).
    file: Option<PathBuf>,
    /// Truncation degree (defaults to N from the file).
    #[arg(long)]
    degree: Option<usize>,
    /// Degree cap for resonance enumeration.
    #[arg(long)]
    cap: Option<usize>,
    /// Number of Liouville levels to certify.
    #[arg(long)]
    kmax: Option<usize>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Starting precision in bits for certified arithmetic.
    #[arg(long)]
    precision: Option<u32>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Initial distance from the origin for verify.
    #[arg(long, default_value_t = 0.1)]
    radius: f64,
    /// Integration time for verify.
    #[arg(long, default_value_t = 5.0)]
    time: f64,
    /// Integration step for verify.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}

fn execute(args: &Args) -> Result<i32, Error> {
    if let Some(t) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let input = match &args.file {
        Some(p) => Some(std::fs::read_to_string(p)?),
        None => None,
    };
    let opts = RunOptions {
        degree: args.degree,
        cap: args.cap,
        kmax: args.kmax,
        precision: args.precision,
        radius: args.radius,
        time: args.time,
        step: args.step,
    };
    let outcome = run(args.command.into(), input.as_deref(), &opts)?;
    match &args.out {
        Some(p) => std::fs::write(p, &outcome.text)?,
        None => print!("{}", outcome.text),
    }
    Ok(outcome.exit_code)
}
