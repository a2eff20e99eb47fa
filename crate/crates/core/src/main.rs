use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hf_correlations::correlations::MinimizerOptions;
use hf_correlations::model::{Construction, Convention, ModelParams};
use hf_correlations::sweep::{
    self, find_critical_kt, find_death_radius, point_report, run_sweep, SweepConfig, CSV_HEADER,
};
use hf_correlations::Error;

/// Thermal concurrence and quantum discord of a Herring-Flicker coupled XXX spin pair.
///
/// Sweeps honour the HF_CORRELATIONS_WORKERS environment variable for the
/// number of worker threads (default: number of CPUs).
#[derive(Parser)]
#[command(name = "hf-correlations", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a grid over R for every (KT, B) pair and write CSV.
    Sweep(SweepArgs),
    /// Evaluate a single point and print one CSV row with header.
    Point(PointArgs),
    /// Largest R with nonzero concurrence at fixed (KT, B).
    DeathRadius(DeathArgs),
    /// Largest KT with nonzero concurrence at the coupling peak R = 1.25.
    CriticalKt(CriticalArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Paper,
    Gibbs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Reconciled,
    Eq3,
}

#[derive(Args)]
struct ModeOpts {
    /// Thermal-state construction.
    #[arg(long, value_enum, default_value = "paper")]
    mode: ModeArg,
    /// Hamiltonian convention (gibbs mode only).
    #[arg(long, value_enum, default_value = "reconciled")]
    convention: ConventionArg,
}

impl ModeOpts {
    fn construction(&self) -> Construction {
        let convention = match self.convention {
            ConventionArg::Reconciled => Convention::Reconciled,
            ConventionArg::Eq3 => Convention::Eq3AsPrinted,
        };
        match self.mode {
            ModeArg::Paper => Construction::Paper,
            ModeArg::Gibbs => Construction::Gibbs(convention),
        }
    }
}

#[derive(Args)]
struct MinimizerArgs {
    /// Number of polar-angle grid points before refinement.
    #[arg(long, default_value_t = 181)]
    grid_theta: usize,
    /// Golden-section refinement width.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    kt: Vec<f64>,
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    b: Vec<f64>,
    #[arg(long)]
    r_min: f64,
    #[arg(long)]
    r_max: f64,
    #[arg(long)]
    r_steps: usize,
    #[command(flatten)]
    mode: ModeOpts,
    #[command(flatten)]
    minimizer: MinimizerArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    r: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    #[arg(long)]
    kt: f64,
    #[command(flatten)]
    mode: ModeOpts,
    #[command(flatten)]
    minimizer: MinimizerArgs,
}

#[derive(Args)]
struct DeathArgs {
    #[arg(long)]
    kt: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    #[command(flatten)]
    mode: ModeOpts,
    /// Bisection bracket width.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args)]
struct CriticalArgs {
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    #[command(flatten)]
    mode: ModeOpts,
    /// Bisection bracket width.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NoEntanglement(_) => 3,
        Error::Io(_) => 4,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Sweep(a) => {
            let cfg = SweepConfig {
                r_min: a.r_min,
                r_max: a.r_max,
                r_steps: a.r_steps,
                b_values: a.b,
                kt_values: a.kt,
                construction: a.mode.construction(),
                minimizer: MinimizerOptions {
                    grid_n: a.minimizer.grid_theta,
                    tol: a.minimizer.tol,
                },
                out_path: a.out,
            };
            let records = run_sweep(&cfg)?;
            eprintln!(
                "wrote {} records to {}",
                records.len(),
                cfg.out_path.display()
            );
        }
        Command::Point(a) => {
            let p = ModelParams::new(a.r, a.b, a.kt)?;
            let opts = MinimizerOptions {
                grid_n: a.minimizer.grid_theta,
                tol: a.minimizer.tol,
            };
            let rec = point_report(&p, a.mode.construction(), &opts)?;
            println!("{CSV_HEADER}");
            println!("{}", rec.csv_row());
        }
        Command::DeathRadius(a) => {
            let r = find_death_radius(a.b, a.kt, a.mode.construction(), a.tol)?;
            println!("{}", sweep::format_number(r));
        }
        Command::CriticalKt(a) => {
            let kt = find_critical_kt(a.b, a.mode.construction(), a.tol)?;
            println!("{}", sweep::format_number(kt));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
