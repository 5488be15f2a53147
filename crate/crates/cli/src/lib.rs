//! Command-line front end: reads instance files, runs the solvers, prints
//! roots and writes CSV traces and samples.
//!
//! Exit status: 0 on success, 2 for unreadable or invalid input (including
//! infeasible or inapplicable instances), 3 when a solver does not converge,
//! 1 for output failures and oracle failures under `--verify`.

pub mod compare;
pub mod instance;
pub mod samples;
pub mod solve;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use instance::{Instance, Kind};

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Input(String),
    NoConvergence(String),
    Verify(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::NoConvergence(_) => 3,
            CliError::Verify(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "error: {m}"),
            CliError::NoConvergence(m) => write!(f, "no convergence: {m}"),
            CliError::Verify(m) => write!(f, "verification failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

/// Root values: 17 significant digits.
pub fn root_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV values: shortest decimal that reads back to the same double.
pub fn csv_float(x: f64) -> String {
    format!("{x:e}")
}

#[derive(Parser, Debug)]
#[command(name = "adaptroot", version, about = "Adaptive-approximation root solvers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve an instance and print one line per root.
    Solve(SolveArgs),
    /// Write CSV samples of f, and of the approximant and tangent at a fit point.
    Samples(SamplesArgs),
    /// Run every method on an instance and print an iterations table.
    Compare(CompareArgs),
}

#[derive(Args, Debug)]
pub struct Target {
    /// Instance kind; must match the file's `kind`.
    #[arg(value_enum)]
    pub kind: Kind,
    /// JSON instance file.
    pub file: PathBuf,
}

#[derive(Args, Debug)]
pub struct Tuning {
    /// Residual tolerance (relative to the problem's scale).
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Solve only this root (numbered from 0).
    #[arg(long)]
    pub root: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub target: Target,
    #[command(flatten)]
    pub tuning: Tuning,
    /// Secular method: bns, transformed or newton.
    #[arg(long)]
    pub method: Option<String>,
    /// Write the iterates of each root to this CSV (suffixed `-i` when there are several).
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Check every root against a bisection oracle.
    #[arg(long)]
    pub verify: bool,
    /// Worker threads for solving secular roots in parallel.
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,
}

#[derive(Args, Debug)]
pub struct SamplesArgs {
    #[command(flatten)]
    pub target: Target,
    /// Sub-interval `lo:hi` to sample.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub range: (f64, f64),
    /// Number of subintervals; `samples + 1` points are evaluated.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Fit the approximant and tangent at this point (adds g_x and n_x).
    #[arg(long, allow_hyphen_values = true)]
    pub fit_point: Option<f64>,
    #[arg(long)]
    pub method: Option<String>,
    /// Output file (default: standard output).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub target: Target,
    #[command(flatten)]
    pub tuning: Tuning,
}

pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("lo: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("hi: {e}"))?;
    if !(lo.is_finite() && hi.is_finite()) {
        return Err("bounds must be finite".into());
    }
    if !(lo < hi) {
        return Err(format!("need lo < hi, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match cli.command {
        Command::Solve(a) => {
            let inst = Instance::load(&a.target.file, a.target.kind)?;
            let req = solve::SolveRequest {
                instance: &inst,
                method: inst.method(a.method.as_deref())?,
                cfg: inst.config(a.tuning.tol, a.tuning.max_iters)?,
                root: inst.root(a.tuning.root),
                jobs: a.jobs.map(usize::from),
            };
            let outcomes = solve::solve(&req)?;
            let several = outcomes.len() > 1;
            for o in &outcomes {
                let v = if a.verify { solve::verify(&inst.problem, o)? } else { None };
                writeln!(out, "{}", solve::root_line(o, v.as_ref())).map_err(io)?;
                if let (Some(base), Some(trace)) = (&a.trace, &o.trace) {
                    let path = solve::trace_path(base, o.index, several);
                    solve::write_trace(&path, trace, v.as_ref().map(|v| v.oracle))?;
                }
            }
            if !solve::all_converged(&outcomes) {
                return Err(CliError::NoConvergence(format!(
                    "{} of {} root(s) did not converge",
                    outcomes.iter().filter(|o| !o.converged()).count(),
                    outcomes.len()
                )));
            }
            Ok(())
        }
        Command::Samples(a) => {
            let inst = Instance::load(&a.target.file, a.target.kind)?;
            let req = samples::SampleRequest {
                instance: &inst,
                method: inst.method(a.method.as_deref())?,
                cfg: inst.config(None, None)?,
                range: a.range,
                samples: a.samples,
                fit_point: a.fit_point,
            };
            match &a.output {
                Some(path) => {
                    let file = std::fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    let mut w = std::io::BufWriter::new(file);
                    samples::write_samples(&req, &mut w)?;
                    w.flush().map_err(io)
                }
                None => samples::write_samples(&req, out),
            }
        }
        Command::Compare(a) => {
            let inst = Instance::load(&a.target.file, a.target.kind)?;
            let cfg = inst.config(a.tuning.tol, a.tuning.max_iters)?;
            let table = compare::compare(&inst, &cfg, inst.root(a.tuning.root))?;
            write!(out, "{}", table.render()).map_err(io)
        }
    }
}

/// Parses `std::env::args`, runs, and maps errors to exit codes.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = lock.flush();
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
