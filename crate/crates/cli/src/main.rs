//! `steadyqfi`: evaluate, sweep and locate optimal-axis crossings of the
//! reset-stabilized two-qubit steady state.
//!
//! Exit codes: 0 success, 2 bad flags or parameters, 3 solver failure,
//! 4 I/O failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use steadyqfi::output::{write_critical, write_rows};
use steadyqfi::{
    evaluate, find_critical_point, run_sweep, Error, Format, GRule, ModelParams, SteadyStateMethod, SweepSpec,
    SweepVar,
};

#[derive(Parser)]
#[command(name = "steadyqfi", version, about = "Steady-state QFI, concurrence and negativity of two reset qubits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single parameter point.
    Eval(EvalArgs),
    /// Sweep r or gamma over a uniform grid.
    Sweep(SweepArgs),
    /// Locate where the optimal axis switches between x and the yz plane.
    Critical(CriticalArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, default_value = "csv", value_parser = parse_format)]
    format: Format,

    /// Write to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Reset strength
    #[arg(long)]
    r: f64,

    /// Dephasing strength
    #[arg(long)]
    gamma: f64,

    /// ZZ coupling strength
    #[arg(long)]
    g: f64,

    #[arg(long, default_value = "closed-form", value_parser = parse_method)]
    method: SteadyStateMethod,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
#[command(group(ArgGroup::new("fixed").required(true).args(["r", "gamma"])))]
#[command(group(ArgGroup::new("coupling").required(true).args(["g", "g_ratio"])))]
struct FixedArgs {
    /// Fixed reset strength (when sweeping gamma)
    #[arg(long)]
    r: Option<f64>,

    /// Fixed dephasing strength (when sweeping r)
    #[arg(long)]
    gamma: Option<f64>,

    /// Fixed coupling strength
    #[arg(long)]
    g: Option<f64>,

    /// Coupling proportional to gamma: g = ratio * gamma
    #[arg(long)]
    g_ratio: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Parameter to vary
    #[arg(long, value_parser = parse_var)]
    vary: SweepVar,

    #[arg(long)]
    from: f64,

    #[arg(long)]
    to: f64,

    /// Number of grid points, endpoints included
    #[arg(long)]
    steps: usize,

    #[command(flatten)]
    fixed: FixedArgs,

    #[arg(long, default_value = "closed-form", value_parser = parse_method)]
    method: SteadyStateMethod,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CriticalArgs {
    #[arg(long, value_parser = parse_var)]
    vary: SweepVar,

    /// Lower end of the search interval
    #[arg(long)]
    lo: f64,

    /// Upper end of the search interval
    #[arg(long)]
    hi: f64,

    #[command(flatten)]
    fixed: FixedArgs,

    #[arg(long, default_value = "closed-form", value_parser = parse_method)]
    method: SteadyStateMethod,

    #[command(flatten)]
    output: OutputArgs,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_method(s: &str) -> Result<SteadyStateMethod, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_var(s: &str) -> Result<SweepVar, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Solver(Error),
    Io(PathBuf, io::Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Solver(_) => 3,
            Failure::Io(..) => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e.root() {
            Error::InvalidParams(_) | Error::InvalidSweep(_) => Failure::Usage(e.to_string()),
            _ => Failure::Solver(e),
        }
    }
}

fn spec_from(
    vary: SweepVar,
    from: f64,
    to: f64,
    steps: usize,
    fixed: &FixedArgs,
    method: SteadyStateMethod,
) -> Result<SweepSpec, Failure> {
    let fixed_value = match (vary, fixed.r, fixed.gamma) {
        (SweepVar::R, None, Some(gamma)) => gamma,
        (SweepVar::Gamma, Some(r), None) => r,
        (SweepVar::R, _, _) => return Err(Failure::Usage("sweeping r requires --gamma (and not --r)".into())),
        (SweepVar::Gamma, _, _) => return Err(Failure::Usage("sweeping gamma requires --r (and not --gamma)".into())),
    };
    let g_rule = match (fixed.g, fixed.g_ratio) {
        (Some(g), None) => GRule::Fixed(g),
        (None, Some(k)) => GRule::Ratio(k),
        _ => return Err(Failure::Usage("give exactly one of --g, --g-ratio".into())),
    };
    let spec = SweepSpec { vary, from, to, steps, fixed: fixed_value, g_rule, method };
    spec.validate()?;
    Ok(spec)
}

fn emit(output: &OutputArgs, write: impl FnOnce(&mut dyn Write, Format) -> io::Result<()>) -> Result<(), Failure> {
    match &output.out {
        Some(path) => {
            let io_err = |e| Failure::Io(path.clone(), e);
            let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
            write(&mut w, output.format).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write(&mut w, output.format).and_then(|_| w.flush()).map_err(|e| Failure::Io("<stdout>".into(), e))
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Eval(args) => {
            let p = ModelParams::new(args.r, args.gamma, args.g)?;
            let row = evaluate(&p, args.method)?;
            emit(&args.output, |w, f| write_rows(w, &[row], f))
        }
        Command::Sweep(args) => {
            let spec = spec_from(args.vary, args.from, args.to, args.steps, &args.fixed, args.method)?;
            let rows = run_sweep(&spec)?;
            emit(&args.output, |w, f| write_rows(w, &rows, f))
        }
        Command::Critical(args) => {
            let spec = spec_from(args.vary, args.lo, args.hi, 2, &args.fixed, args.method)?;
            let cp = find_critical_point(&spec)?;
            emit(&args.output, |w, f| write_critical(w, &cp, f))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Solver(e) => eprintln!("solver error: {e}"),
                Failure::Io(path, e) => eprintln!("I/O error on {}: {e}", path.display()),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
