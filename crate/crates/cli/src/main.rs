use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nchw_cli::config::{DEFAULT_DIM, DEFAULT_N_INTERIOR, DEFAULT_SEED, DEFAULT_TOL_DEFECT};
use nchw_cli::render::now_timestamp;
use nchw_cli::{
    cmd_darboux, cmd_intertwine, cmd_scan, cmd_verify_rep, cmd_weyl, render, write_scan, Axis,
    Format, Outcome, RunConfig, ScanGrid, UsageError, EXIT_FAIL, EXIT_USAGE,
};
use nchw_core::fock::{DEFAULT_MARGIN, DEFAULT_VACUUM_TOL};
use nchw_core::{Branch, DEFAULT_CRITICAL_BAND};

#[derive(Parser)]
#[command(
    name = "nchw",
    version,
    about = "Reduce and verify the noncommutative Heisenberg algebra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the map to canonical form, normalize and invert it
    Darboux(Common),
    /// Check the commutation relations of a truncated matrix realization
    VerifyRep(Common),
    /// Compare symbolic, closed-form and numeric Weyl phases
    Weyl(Common),
    /// Build intertwiners between equivalent canonical representations
    Intertwine(Common),
    /// Classify a (theta, gamma) grid; writes one JSON record per line
    Scan(ScanArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    theta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    hbar: f64,
    #[arg(long, default_value_t = DEFAULT_DIM)]
    dim: usize,
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    margin: usize,
    #[arg(long, value_enum, default_value = "minus")]
    branch: BranchArg,
    #[arg(long, num_args = 2, value_names = ["A1", "A2"], allow_negative_numbers = true)]
    alpha: Option<Vec<f64>>,
    #[arg(long, num_args = 2, value_names = ["B1", "B2"], allow_negative_numbers = true)]
    beta: Option<Vec<f64>>,
    #[arg(long, default_value_t = DEFAULT_CRITICAL_BAND)]
    tol_critical: f64,
    #[arg(long, default_value_t = DEFAULT_TOL_DEFECT)]
    tol_defect: f64,
    #[arg(long, default_value_t = DEFAULT_VACUUM_TOL)]
    tol_vacuum: f64,
    #[arg(long, default_value_t = DEFAULT_N_INTERIOR)]
    n_interior: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [0.1, 4.0])]
    theta_range: Vec<f64>,
    #[arg(long, default_value_t = 40)]
    theta_steps: usize,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [0.1, 4.0], allow_negative_numbers = true)]
    gamma_range: Vec<f64>,
    #[arg(long, default_value_t = 40)]
    gamma_steps: usize,
    #[command(flatten)]
    common: Common,
}

impl Common {
    fn config(&self) -> RunConfig {
        let pair = |v: &Option<Vec<f64>>, default: [f64; 2]| match v.as_deref() {
            Some([a, b]) => [*a, *b],
            _ => default,
        };
        let defaults = RunConfig::default();
        RunConfig {
            theta: self.theta,
            gamma: self.gamma,
            hbar: self.hbar,
            dim: self.dim,
            margin: self.margin,
            branch: match self.branch {
                BranchArg::Plus => Branch::Plus,
                BranchArg::Minus => Branch::Minus,
            },
            alpha: pair(&self.alpha, defaults.alpha),
            beta: pair(&self.beta, defaults.beta),
            tol_critical: self.tol_critical,
            tol_defect: self.tol_defect,
            tol_vacuum: self.tol_vacuum,
            n_interior: self.n_interior,
            seed: self.seed,
            output: self.output.clone(),
            format: match self.format {
                FormatArg::Json => Format::Json,
                FormatArg::Text => Format::Text,
            },
            timestamp: !self.no_timestamp,
        }
    }
}

fn sink(path: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit(outcome: Outcome, cfg: &RunConfig) -> io::Result<i32> {
    let ts = cfg.timestamp.then(now_timestamp);
    let mut w = sink(&cfg.output)?;
    w.write_all(render(&outcome.report, cfg.format, ts).as_bytes())?;
    w.flush()?;
    Ok(outcome.exit_code)
}

fn scan(args: &ScanArgs) -> Result<io::Result<i32>, UsageError> {
    let cfg = args.common.config();
    let grid = ScanGrid::new(
        Axis::new(args.theta_range[0], args.theta_range[1], args.theta_steps)?,
        Axis::new(args.gamma_range[0], args.gamma_range[1], args.gamma_steps)?,
        cfg.hbar,
    )?;
    let records = cmd_scan(&grid, &cfg)?;
    Ok(sink(&cfg.output)
        .and_then(|w| write_scan(&records, w))
        .map(|_| 0))
}

fn run(cli: Cli) -> Result<io::Result<i32>, UsageError> {
    let report = |f: fn(&RunConfig) -> Result<Outcome, UsageError>, c: &Common| {
        let cfg = c.config();
        f(&cfg).map(|o| emit(o, &cfg))
    };
    match &cli.command {
        Command::Darboux(c) => report(cmd_darboux, c),
        Command::VerifyRep(c) => report(cmd_verify_rep, c),
        Command::Weyl(c) => report(cmd_weyl, c),
        Command::Intertwine(c) => report(cmd_intertwine, c),
        Command::Scan(s) => scan(s),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let code = match run(cli) {
        Ok(Ok(code)) => code,
        Ok(Err(io_err)) => {
            eprintln!("error: {io_err}");
            EXIT_FAIL
        }
        Err(usage) => {
            eprintln!("{usage}");
            EXIT_USAGE
        }
    };
    ExitCode::from(code as u8)
}
