//! Command-line front end: simulate, compensate, fit, analyze, kk.
//!
//! Exit codes: 0 success, 2 config/format problems, 3 numeric failures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use slowlight::config::ExperimentConfig;
use slowlight::runner;

#[derive(Parser)]
#[command(
    name = "slowlight",
    version,
    about = "Slow-light pulse propagation, spectral compensation and analysis"
)]
struct Cli {
    /// Emit SVG plots alongside the data files.
    #[arg(long, global = true)]
    plots: bool,

    /// Output directory (defaults to the config's output.dir, else ".").
    #[arg(long, global = true, value_name = "DIR")]
    outdir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline described by a config file.
    Simulate {
        /// Flat key-value config (see configs/ for examples).
        config: PathBuf,
    },
    /// Compensate a recorded output trace against a measured transmission.
    Compensate {
        /// Recorded output trace CSV (time_s,intensity).
        #[arg(long = "out", value_name = "TRACE")]
        trace: PathBuf,
        /// Measured transmission CSV (detuning_hz,value).
        #[arg(long, value_name = "CSV")]
        transmission: PathBuf,
        /// Wiener regularization, relative to the peak amplitude transmission.
        #[arg(long = "reg-eps", default_value_t = slowlight::compensation::DEFAULT_REG_EPS)]
        reg_eps: f64,
    },
    /// Fit the Lorentzian window model to a transmission CSV.
    Fit { csv: PathBuf },
    /// Compare two recorded traces and report delays, loss and fidelity.
    Analyze { input: PathBuf, output: PathBuf },
    /// Minimum-phase reconstruction from a transmission CSV.
    Kk { csv: PathBuf },
}

fn run(cli: Cli) -> slowlight::Result<()> {
    match cli.command {
        Command::Simulate { config } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let outdir = cli
                .outdir
                .or_else(|| cfg.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("."));
            let artifacts = runner::run_simulate(&cfg, &outdir, cli.plots)?;
            println!(
                "simulate: wrote {} files to {}",
                artifacts.files.len(),
                outdir.display()
            );
            print!("{}", artifacts.report.to_json());
        }
        Command::Compensate {
            trace,
            transmission,
            reg_eps,
        } => {
            let outdir = cli.outdir.unwrap_or_else(|| PathBuf::from("."));
            let (report, files) =
                runner::run_compensate(&trace, &transmission, reg_eps, &outdir, cli.plots)?;
            println!("compensate: wrote {} files to {}", files.len(), outdir.display());
            print!("{}", report.to_json());
        }
        Command::Fit { csv } => {
            let outdir = cli.outdir.unwrap_or_else(|| PathBuf::from("."));
            let (model, rms, path) = runner::run_fit(&csv, &outdir)?;
            println!(
                "fit: gamma_hz = {:.6e}, depth = {:.6e}, floor = {:.6e}, rms_residual = {:.3e}",
                model.gamma_hz(),
                model.depth(),
                model.floor(),
                rms
            );
            println!("fit: wrote {}", path.display());
        }
        Command::Analyze { input, output } => {
            let outdir = cli.outdir.unwrap_or_else(|| PathBuf::from("."));
            let (report, warnings, path) = runner::run_analyze(&input, &output, &outdir)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            println!("analyze: wrote {}", path.display());
            print!("{}", report.to_json());
        }
        Command::Kk { csv } => {
            let outdir = cli.outdir.unwrap_or_else(|| PathBuf::from("."));
            let files = runner::run_kk(&csv, &outdir)?;
            for f in files {
                println!("kk: wrote {}", f.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error[{}]: {err}", err.class());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
