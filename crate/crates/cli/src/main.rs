use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gatemplate_cli::config::OUT_DIR_ENV;
use gatemplate_cli::{inspect, CliError, RunConfig};

#[derive(Parser)]
#[command(
    name = "gatemplate",
    version,
    about = "Evolve sentences from corpus templates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract and factor templates, train both language models.
    Train {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the genetic search on trained artifacts.
    Generate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Summarize a generate output directory.
    Inspect {
        dir: PathBuf,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
}

fn load(path: &Path) -> Result<RunConfig, CliError> {
    let override_dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    Ok(RunConfig::load(path)?.with_output_override(override_dir))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Train { config } => {
            let cfg = load(&config)?;
            let m = gatemplate_cli::train(&cfg)?;
            println!(
                "{} sentences, {} templates ({} after factoring by {}) -> {}",
                m.sentences,
                m.templates_before,
                m.templates_after,
                cfg.factor,
                cfg.output_dir.display()
            );
        }
        Command::Generate { config } => {
            let cfg = load(&config)?;
            let r = gatemplate_cli::generate(&cfg)?;
            if let Some(last) = r.stats.last() {
                println!(
                    "generation {}: mean fitness {:.4}, max {:.4}, mean length {:.2} -> {}",
                    last.generation,
                    last.mean_fitness,
                    last.max_fitness,
                    last.mean_len,
                    cfg.output_dir.display()
                );
            }
        }
        Command::Inspect { dir, top } => print!("{}", inspect::report(&dir, top)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
