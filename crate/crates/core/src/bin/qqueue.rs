use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quantum_queue::bounds::Measure;
use quantum_queue::experiment::{list_scenarios, lookup, parse_config, run_experiment, ExperimentConfig, GridSpec};
use quantum_queue::Error;

#[derive(Parser)]
#[command(name = "qqueue", version, about = "Queueing bounds and Monte Carlo for quantum channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config file or a shipped scenario by name.
    Run {
        config: String,
        /// Base seed for the Monte Carlo ensemble.
        #[arg(long)]
        seed: Option<u64>,
        /// Number of Monte Carlo paths.
        #[arg(long)]
        paths: Option<usize>,
        /// Output directory (overrides the config's [output] dir).
        #[arg(long, env = "QQUEUE_OUT_DIR")]
        out_dir: Option<PathBuf>,
        /// Argument grid `name=start:end:points`; `x` sets backlog and
        /// throughput, `d` sets delay, or name a measure.
        #[arg(long = "grid", value_name = "NAME=A:B:N")]
        grids: Vec<String>,
    },
    /// List shipped scenarios.
    List,
    /// Parse and validate a config file or shipped scenario.
    Validate { config: String },
}

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_VALIDITY: u8 = 3;

fn load(source: &str) -> Result<ExperimentConfig, Error> {
    let path = PathBuf::from(source);
    if path.exists() {
        let text = std::fs::read_to_string(&path)?;
        parse_config(&text).map_err(|e| e.context(source.to_string()))
    } else {
        lookup(source)
            .map_err(|_| Error::Config {
                line: 0,
                message: format!("`{source}` is neither a file nor a shipped scenario"),
            })?
            .config()
    }
}

fn apply_grid(cfg: &mut ExperimentConfig, arg: &str) -> Result<(), String> {
    let (name, spec) = arg.split_once('=').ok_or_else(|| format!("--grid `{arg}` is not name=a:b:n"))?;
    let grid: GridSpec = spec.parse()?;
    let measures = match name.trim() {
        "x" => vec![Measure::Backlog, Measure::Throughput],
        "d" => vec![Measure::Delay],
        other => vec![other.parse::<Measure>()?],
    };
    for m in measures {
        if m == Measure::Delay && (grid.start < 0.0 || grid.end > cfg.horizon as f64) {
            return Err(format!("delay grid must lie in [0, {}]", cfg.horizon));
        }
        cfg.set_grid(m, grid);
    }
    Ok(())
}

fn exit_for(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_config() { EXIT_CONFIG } else { EXIT_NUMERICAL })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for e in list_scenarios() {
                println!("{:<22} {}", e.name, e.description());
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match load(&config) {
            Ok(cfg) => {
                println!("{}: ok ({} regime, horizon {})", cfg.name, cfg.regime.as_str(), cfg.horizon);
                ExitCode::SUCCESS
            }
            Err(e) => exit_for(&e),
        },
        Command::Run {
            config,
            seed,
            paths,
            out_dir,
            grids,
        } => {
            let mut cfg = match load(&config) {
                Ok(c) => c,
                Err(e) => return exit_for(&e),
            };
            if let Some(s) = seed {
                cfg.monte_carlo.seed = s;
            }
            if let Some(p) = paths {
                if p == 0 {
                    eprintln!("error: --paths must be at least 1");
                    return ExitCode::from(EXIT_CONFIG);
                }
                cfg.monte_carlo.paths = p;
            }
            for g in &grids {
                if let Err(m) = apply_grid(&mut cfg, g) {
                    eprintln!("error: {m}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            }
            let dir = out_dir
                .or_else(|| cfg.output_dir.clone().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("out"));
            match run_experiment(&cfg, &dir) {
                Ok(outcome) => {
                    println!(
                        "{}: wrote {} ({} of {} bound rows outside the empirical interval)",
                        cfg.name,
                        dir.display(),
                        outcome.violations.len(),
                        outcome.checked_rows
                    );
                    if outcome.is_valid() {
                        ExitCode::SUCCESS
                    } else {
                        eprintln!("error: bound validity check failed");
                        ExitCode::from(EXIT_VALIDITY)
                    }
                }
                Err(e) => exit_for(&e),
            }
        }
    }
}
