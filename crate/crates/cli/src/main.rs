//! `qrslab` campaign runner: generate an instance, sample it, score the
//! samples and print the results.

mod commands;
mod config;
mod error;
mod instance;
mod oracle;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};

const DEFAULT_OUT: &str = "qrslab-out";
const DEFAULT_ORACLE_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(name = "qrslab", version, about = "Random-sampling benchmark campaigns at desk scale")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment config (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Artifact directory; defaults to the config's `output` or `qrslab-out`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw a random instance and write instance.json.
    Generate,
    /// Sample the instance and write samples.jsonl.
    Sample,
    /// Score the samples, writing reports.json and run_record.json.
    Verify,
    /// Rebuild a brute-force fixture into <out>/oracle/<name>.json.
    Oracle {
        name: Option<String>,
        /// Print the fixture registry.
        #[arg(long)]
        list: bool,
    },
    /// Print the reports as a text table.
    Report,
}

fn load_config(cli: &Cli) -> CliResult<ExperimentConfig> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Usage("--config is required for this command".into()))?;
    let mut config = ExperimentConfig::load(path)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn out_dir(cli: &Cli, config: Option<&ExperimentConfig>) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| config.and_then(|c| c.output.clone()))
        .unwrap_or_else(|| Path::new(DEFAULT_OUT).to_path_buf())
}

fn run(cli: &Cli) -> CliResult<u8> {
    match &cli.command {
        Command::Generate => {
            let config = load_config(cli)?;
            println!("{}", commands::cmd_generate(&config, &out_dir(cli, Some(&config)))?);
        }
        Command::Sample => {
            let config = load_config(cli)?;
            println!("{}", commands::cmd_sample(&config, &out_dir(cli, Some(&config)))?);
        }
        Command::Verify => {
            let config = load_config(cli)?;
            let out = out_dir(cli, Some(&config));
            let record = commands::cmd_verify(&config, &out)?;
            println!(
                "{}",
                json!({
                    "reports": out.join(commands::REPORTS_FILE).display().to_string(),
                    "passed": record.passed,
                    "content_hash": record.content_hash,
                })
            );
            return Ok(if record.passed { 0 } else { 1 });
        }
        Command::Oracle { name, list } => {
            if *list {
                println!("{}", oracle::list());
                return Ok(0);
            }
            let name = name
                .as_deref()
                .ok_or_else(|| CliError::Usage("oracle needs a fixture name or --list".into()))?;
            let seed = cli.seed.unwrap_or(DEFAULT_ORACLE_SEED);
            let (path, hash) = oracle::cmd_oracle(name, seed, &out_dir(cli, None))?;
            println!("{}", json!({"fixture": name, "path": path.display().to_string(), "sha256": hash}));
        }
        Command::Report => {
            let config = cli.config.as_ref().map(|_| load_config(cli)).transpose()?;
            print!("{}", commands::cmd_report(&out_dir(cli, config.as_ref()))?);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", CliError::Usage(e.to_string().trim().to_string()).to_json());
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
