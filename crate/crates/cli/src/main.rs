use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eigpert::tribounds::NeighborRule;
use eigpert_cli::commands::{
    self, parse_eps_grid, AedArgs, BoundBlockArgs, MultieigArgs, WilkinsonArgs,
};
use eigpert_cli::matfile::{load_matrix, Matrix};
use eigpert_cli::report::RunReport;
use eigpert_cli::CliError;

/// Structured eigenvalue perturbation bounds with oracle verification.
///
/// Exit status: 0 when every requested verification is sound, 1 when any
/// verdict is unsound, 2 on input or numerical errors.
#[derive(Parser)]
#[command(name = "eigpert", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Also write the records as a CSV table.
    #[arg(long, value_name = "FILE", global = true)]
    csv: Option<PathBuf>,
    /// Compare every bound with the shift observed through the oracle.
    #[arg(long, global = true)]
    verify: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Weyl, quadratic-residual and block bounds for A + E split at k.
    BoundBlock {
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
        #[arg(long, value_name = "FILE")]
        perturbation: PathBuf,
        /// Order of the trailing block.
        #[arg(long)]
        k: usize,
        /// 1-based eigenvalue ranks (repeatable); defaults to all leading ranks.
        #[arg(long = "index")]
        indices: Vec<usize>,
        /// Use the refined τ denominator gap − ‖E‖ − ‖E22‖.
        #[arg(long)]
        refined: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Pair gaps of Wilkinson's matrix of order 2n+1 against their bounds.
    Wilkinson {
        #[arg(long)]
        n: usize,
        /// Pair index ℓ (repeatable); defaults to 1..n-1.
        #[arg(long = "ell")]
        ells: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Aggressive early deflation of a trailing window of size k.
    Aed {
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
        #[arg(long)]
        k: usize,
        /// Decay depth; the best admissible depth per eigenvalue when omitted.
        #[arg(long)]
        j: Option<usize>,
        /// Eigenvalue slack; defaults to |b_{n-k}|.
        #[arg(long)]
        alpha: Option<f64>,
        /// Deflation tolerance relative to ‖T‖₂.
        #[arg(long, default_value_t = 1e-16)]
        tol: f64,
        /// Neighbor rule for the decay factors: stated_def, proof_form or conservative.
        #[arg(long, default_value = "conservative")]
        rule: NeighborRule,
        /// Run QR iteration with AED and report per-step statistics.
        #[arg(long)]
        simulate: bool,
        /// Step budget for --simulate; defaults to 30n.
        #[arg(long)]
        max_sweeps: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// First-order expansion of multiple eigenvalues of A under εE.
    Multieig {
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
        #[arg(long, value_name = "FILE")]
        perturbation: PathBuf,
        /// Relative cluster diameter for detecting multiple eigenvalues.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Log-spaced ε grid as hi:lo:count.
        #[arg(long, default_value = "1e-2:1e-5:13")]
        eps_grid: String,
        #[command(flatten)]
        common: Common,
    },
    /// Reproduce every case study against its published value.
    VerifyAll {
        #[arg(long, value_name = "FILE")]
        csv: Option<PathBuf>,
    },
}

fn dense(path: &Path) -> Result<eigpert::eigcore::DenseHermitian, CliError> {
    Ok(load_matrix(path)?.to_dense())
}

fn run(cli: Cli, echo: &str) -> Result<(RunReport, Option<PathBuf>), CliError> {
    Ok(match cli.command {
        Command::BoundBlock { matrix, perturbation, k, indices, refined, common } => {
            let args = BoundBlockArgs {
                a: dense(&matrix)?,
                e: dense(&perturbation)?,
                k,
                indices,
                refined,
                verify: common.verify,
            };
            (commands::bound_block(&args, echo)?, common.csv)
        }
        Command::Wilkinson { n, ells, common } => {
            let args = WilkinsonArgs { n, ells, verify: common.verify };
            (commands::wilkinson(&args, echo)?, common.csv)
        }
        Command::Aed { matrix, k, j, alpha, tol, rule, simulate, max_sweeps, common } => {
            let t = match load_matrix(&matrix)? {
                m @ Matrix::Dense(_) => m.to_tridiagonal()?,
                Matrix::Tridiagonal(t) => t,
            };
            let args = AedArgs { t, k, j, alpha, tol, rule, simulate, max_sweeps, verify: common.verify };
            (commands::aed(&args, echo)?, common.csv)
        }
        Command::Multieig { matrix, perturbation, tol, eps_grid, common } => {
            let args = MultieigArgs {
                a: dense(&matrix)?,
                e: dense(&perturbation)?,
                cluster_tol: tol,
                grid: parse_eps_grid(&eps_grid)?,
                verify: common.verify,
            };
            (commands::multieig(&args, echo)?, common.csv)
        }
        Command::VerifyAll { csv } => (commands::verify_all(echo)?, csv),
    })
}

fn main() -> ExitCode {
    let echo = std::iter::once("eigpert".to_string())
        .chain(std::env::args().skip(1))
        .collect::<Vec<_>>()
        .join(" ");
    let cli = Cli::parse();
    match run(cli, &echo) {
        Ok((rep, csv)) => {
            print!("{}", rep.render());
            if let Some(path) = csv {
                if let Err(e) = rep.write_csv(&path) {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if rep.is_sound() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
