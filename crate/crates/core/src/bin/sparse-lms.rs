use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sparse_lms::experiment::ExecutionMode;
use sparse_lms::io::{cmd_demo, cmd_plot, cmd_run, exit_code};

/// Sparse system identification with LMS-family adaptive filters.
#[derive(Parser)]
#[command(name = "sparse-lms", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte-Carlo experiment and write MSD curves and reports.
    Run {
        /// Config file; the reference experiment is used when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Run trials on a single thread.
        #[arg(long)]
        serial: bool,
    },
    /// Generate a matplotlib script for an msd.csv file.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        /// Script path; the figure is saved beside it as .png.
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated phase lengths for boundary markers. Defaults to
        /// the run_meta.txt next to the CSV.
        #[arg(long, value_delimiter = ',')]
        phase_lengths: Option<Vec<usize>>,
    },
    /// Quick reduced-trial run that prints the per-phase ranking.
    Demo {
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            config,
            seed,
            out,
            serial,
        } => {
            let mode = if serial {
                ExecutionMode::Serial
            } else {
                ExecutionMode::Parallel
            };
            cmd_run(config.as_deref(), seed, &out, mode).map(|result| {
                print!(
                    "{}",
                    sparse_lms::io::commands::format_steady_state(&result.report)
                );
                println!("wrote {}", out.display());
            })
        }
        Command::Plot {
            csv,
            out,
            phase_lengths,
        } => cmd_plot(&csv, &out, phase_lengths.as_deref()).map(|image| {
            println!(
                "wrote {} (run it to produce {})",
                out.display(),
                image.display()
            );
        }),
        Command::Demo { seed } => cmd_demo(seed).map(|(_, text)| print!("{text}")),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
