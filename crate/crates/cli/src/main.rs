use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use idmps_cli::commands::{self, OscillatorConfig, Report, RANK_TOL_VAR};
use idmps_cli::CliError;

/// Dense quantum-state tensors to matrix product states and back.
///
/// Reports go to stdout as JSON; diagnostics go to stderr. Exit codes:
/// 0 success, 1 bad input, 2 numerical failure, 3 verification failed.
/// IDMPS_RANK_TOL overrides the default 1e-12 rank cut.
#[derive(Debug, Parser)]
#[command(name = "idmps", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Decompose a tensor file into an MPS file.
    Decompose {
        input: PathBuf,
        /// left, right, mixed:<n> or vidal
        #[arg(long, default_value = "vidal")]
        form: String,
        #[arg(long)]
        max_bond: Option<usize>,
        /// Drop trailing Schmidt values while their root-sum-square stays below this.
        #[arg(long)]
        weight_tol: Option<f64>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Contract an MPS file back into a tensor file.
    Reconstruct {
        input: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        /// Tensor file to measure the reconstruction against.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Check the normalization conditions of the form an MPS file claims.
    Verify {
        input: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Also require unit norm.
        #[arg(long)]
        normalized: bool,
    },
    /// Build the three-oscillator MPS; optionally dump element magnitudes as CSV.
    Oscillator {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        omega_tilde: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        theta: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        phi: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        varphi: Option<f64>,
        /// Physical dimension kept per site.
        #[arg(long)]
        cutoff: Option<usize>,
        /// TOML file with any of the parameters above; flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let rank_tol = commands::rank_tol(std::env::var(RANK_TOL_VAR).ok().as_deref())?;
    match cli.cmd {
        Cmd::Decompose {
            input,
            form,
            max_bond,
            weight_tol,
            out,
        } => commands::decompose(&commands::DecomposeArgs {
            input,
            form: commands::parse_form(&form)?,
            max_bond,
            weight_tol,
            out,
            rank_tol,
        }),
        Cmd::Reconstruct { input, out, reference } => commands::reconstruct(&commands::ReconstructArgs {
            input,
            out,
            reference,
            rank_tol,
        }),
        Cmd::Verify { input, tol, normalized } => commands::verify(&commands::VerifyArgs { input, tol, normalized }),
        Cmd::Oscillator {
            n,
            omega_tilde,
            theta,
            phi,
            varphi,
            cutoff,
            config,
            out,
            csv,
        } => {
            let flags = OscillatorConfig {
                n,
                omega_tilde,
                theta,
                phi,
                varphi,
                cutoff,
            };
            let base = match &config {
                Some(p) => OscillatorConfig::from_file(p)?,
                None => OscillatorConfig::default(),
            };
            let params = flags.over(base).params()?;
            commands::oscillator(&commands::OscillatorArgs { params, out, csv })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report.json).unwrap_or_default());
            if report.code != 0 {
                eprintln!("idmps: verification failed");
            }
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("idmps: {e}");
            ExitCode::from(e.code)
        }
    }
}
