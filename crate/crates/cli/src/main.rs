use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use autolabel_cli::{run, Command, Format, PipelineConfig};

/// Automatic labeling of author name instances and supervised
/// disambiguation trained on the labels.
#[derive(Debug, Parser)]
#[command(name = "autolabel", version)]
struct Cli {
    /// Pipeline configuration (JSON). Defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Format of report tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("AUTOLABEL_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match &cli.config {
        Some(path) => PipelineConfig::load(path),
        None => Ok(PipelineConfig::default()),
    }
    .and_then(|config| {
        run(
            cli.command,
            &config.with_overrides(cli.seed, cli.out.clone()),
            cli.format,
        )
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
