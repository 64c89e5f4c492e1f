use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ncwave::cli;

#[derive(Parser)]
#[command(
    name = "ncwave",
    about = "Soliton field generation, residual verification, and modulation-instability sweeps",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the scenario's field and write it as CSV
    Soliton {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the equation residual of the scenario's field (JSON stats)
    Verify {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep the modulation-instability growth rate (CSV + band JSON)
    Mi {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Plane-wave background amplitude
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long = "k-max", default_value_t = 3.0)]
        k_max: f64,
        #[arg(long, default_value_t = 601)]
        samples: usize,
        /// Band summary path (defaults to <out>.bands.json)
        #[arg(long = "bands-out")]
        bands_out: Option<PathBuf>,
    },
    /// Zero the coefficients of a named limit, re-verify, and save the
    /// reduced scenario
    Reduce {
        #[arg(long)]
        scenario: PathBuf,
        /// One of: nls, hirota, lpd, mkdv
        #[arg(long)]
        limit: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn configure_threads() {
    if let Ok(v) = std::env::var("NCWAVE_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n > 0 {
                // 0 means automatic sizing; ignore failures from double init
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn run() -> ncwave::Result<()> {
    let cli = Cli::parse();
    configure_threads();
    match cli.command {
        Command::Soliton { scenario, out } => cli::cmd_soliton(&scenario, &out),
        Command::Verify { scenario, out } => cli::cmd_verify(&scenario, &out),
        Command::Mi {
            scenario,
            out,
            c,
            k_max,
            samples,
            bands_out,
        } => {
            let bands = bands_out.unwrap_or_else(|| {
                let mut p = out.as_os_str().to_owned();
                p.push(".bands.json");
                PathBuf::from(p)
            });
            cli::cmd_mi(&scenario, c, k_max, samples, &out, &bands)
        }
        Command::Reduce {
            scenario,
            limit,
            out,
        } => {
            let report = cli::cmd_reduce(&scenario, &limit, &out)?;
            println!("{report}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ncwave: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
