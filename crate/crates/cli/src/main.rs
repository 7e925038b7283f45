//! `auk` — dependence analysis from the command line.
//!
//! Exit codes: 0 success, 1 input error (bad flags, unreadable or malformed
//! input), 2 computation/output error. Tie warnings go to stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use auk::report::{analyze, fgm_curve_csv, AnalyzeOptions, FgmCurveMethod};
use auk::samplers::Family;
use auk::simulate;
use auk::Error;

#[derive(Parser)]
#[command(name = "auk", version, about = "Multi-panel Kendall plots and AUK dependence indices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a CSV of (x, y) pairs: report.json, kplot.svg, curves.csv
    Analyze {
        /// Input CSV with one observation pair per row
        #[arg(long)]
        input: PathBuf,
        /// Treat the first row as a header
        #[arg(long)]
        header: bool,
        /// 0-based column holding x
        #[arg(long, default_value_t = 0)]
        x_col: usize,
        /// 0-based column holding y
        #[arg(long, default_value_t = 1)]
        y_col: usize,
        /// Bootstrap replication count; omit to skip interval estimation
        #[arg(long)]
        bootstrap: Option<usize>,
        /// Confidence levels for the bootstrap intervals
        #[arg(long, value_delimiter = ',', default_value = "0.90,0.95")]
        levels: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Grid size for the Kendall curves
        #[arg(long, default_value_t = 201)]
        grid: usize,
        /// Directory receiving report.json, kplot.svg, curves.csv
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Summarize |r|, |tau|, i_auk, i_auk_std over replicated draws
    Simulate {
        /// bvn | fgm | morgenstern | plackett | bvt5 | noise_ratio | triangle | circle
        #[arg(long)]
        family: String,
        /// Family parameter (rho, gamma, alpha or psi); only for families that take one
        #[arg(long)]
        param: Option<f64>,
        /// Sample size per replication
        #[arg(long)]
        n: usize,
        /// Replication count
        #[arg(long)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV (columns statistic,mean,sd)
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate the FGM AUK(gamma) curve as CSV
    FgmCurve {
        #[arg(long, default_value_t = -0.99, allow_hyphen_values = true)]
        gamma_min: f64,
        #[arg(long, default_value_t = 0.99, allow_hyphen_values = true)]
        gamma_max: f64,
        /// Grid points between gamma_min and gamma_max
        #[arg(long, default_value_t = 199)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
        method: MethodArg,
        /// Draws per grid point (mc method only)
        #[arg(long, default_value_t = 1_000_000)]
        mc_draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV (columns gamma,auk)
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Closed,
    Quadrature,
    Mc,
}

impl From<MethodArg> for FgmCurveMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Closed => FgmCurveMethod::Closed,
            MethodArg::Quadrature => FgmCurveMethod::Quadrature,
            MethodArg::Mc => FgmCurveMethod::Mc,
        }
    }
}

fn write_file(path: &Path, contents: &str) -> auk::Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn run(command: Command) -> auk::Result<()> {
    match command {
        Command::Analyze {
            input,
            header,
            x_col,
            y_col,
            bootstrap,
            levels,
            seed,
            grid,
            out_dir,
        } => {
            let options = AnalyzeOptions {
                has_header: header,
                x_col,
                y_col,
                bootstrap,
                levels,
                seed,
                grid_size: grid,
            };
            let report = analyze(&input, &out_dir, &options)?;
            if report.source.x_tie_count > 0 || report.source.y_tie_count > 0 {
                eprintln!(
                    "warning: tied values in input ({} in x, {} in y); \
                     the estimators assume continuous data",
                    report.source.x_tie_count, report.source.y_tie_count
                );
            }
        }
        Command::Simulate {
            family,
            param,
            n,
            reps,
            seed,
            out,
        } => {
            let family = Family::from_name(&family, param)?;
            let summary = simulate::run(family, n, reps, seed)?;
            write_file(&out, &summary.to_csv())?;
        }
        Command::FgmCurve {
            gamma_min,
            gamma_max,
            steps,
            method,
            mc_draws,
            seed,
            out,
        } => {
            let csv = fgm_curve_csv(gamma_min, gamma_max, steps, method.into(), mc_draws, seed)?;
            write_file(&out, &csv)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version print to stdout and exit 0; real usage errors are
            // input errors
            let code = u8::from(err.use_stderr());
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(if err.is_input_error() { 1 } else { 2 })
        }
    }
}
