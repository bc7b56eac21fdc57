use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{error, info};

use qswitch_cli::{run, CliError, Scenario, ScenarioConfig};

#[derive(Parser)]
#[command(name = "qswitch", version, about = "Quantum switch with a thermally collided control: sweeps and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// CSV destination; overrides the config's `output` (default: stdout)
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for grid sweeps
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for random draws; overrides the config's `seed`
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Log progress to stderr (-vv for debug output)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a config file
    Run { config: PathBuf },
    /// Run the oracle checks
    Verify,
    /// List available scenarios
    ListScenarios,
}

fn write_table(table: &qswitch_cli::csv::Table, path: Option<&Path>) -> Result<(), CliError> {
    let output_error = |source: io::Error| CliError::Output {
        path: path.map_or_else(|| "stdout".to_string(), |p| p.display().to_string()),
        source,
    };
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).map_err(output_error)?);
            table.write(&mut w).and_then(|_| w.flush()).map_err(output_error)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            table.write(&mut lock).map_err(output_error)
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = match &cli.command {
        Command::ListScenarios => {
            for s in Scenario::ALL {
                println!("{:<22}{}", s.name(), s.description());
            }
            return Ok(());
        }
        Command::Verify => ScenarioConfig::bare(Scenario::Verify),
        Command::Run { config } => ScenarioConfig::from_path(config)?,
    };
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    let output = cli.output.clone().or_else(|| cfg.output.clone());
    info!("running {} with seed {seed}", cfg.scenario);
    let result = run(&cfg, seed)?;
    write_table(&result.table, output.as_deref())?;
    if let Some(p) = &output {
        info!("wrote {} rows to {}", result.table.rows.len(), p.display());
    }
    if result.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(format!("failed checks: {}", result.failures.join("; "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            error!("cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
