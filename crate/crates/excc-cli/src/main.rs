//! `excc`: batch front-end for the polynomial growth laboratory.
//!
//! Three subcommands: `validate` parses and checks a configuration,
//! `run` executes its experiment and writes CSV/JSON artifacts plus a
//! manifest, and `plots` emits matplotlib scripts next to existing
//! artifacts. Exit codes: 0 on success, 2 for configuration or
//! validation problems, 3 for numerical failures such as a
//! rank-deficient Gram matrix.
//!
//! The environment variable `EXCC_THREADS` caps the worker pool. All
//! artifacts except the manifest are byte-identical across runs and
//! thread counts for a fixed configuration and seed.

mod artifacts;
mod config;
mod plots;
mod runner;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Failure classes, mapped onto process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Configuration, filesystem, or precondition problem; exit 2.
    Validation(String),
    /// Numeric breakdown inside an experiment; exit 3.
    Numerical(String),
}

impl From<excc_core::Error> for CliError {
    fn from(e: excc_core::Error) -> Self {
        match e {
            excc_core::Error::RankDeficient { .. }
            | excc_core::Error::Numerical(_)
            | excc_core::Error::DegenerateFit(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "excc",
    version,
    about = "Growth estimators for polynomial spaces with lattice-body degree constraints"
)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Validate a configuration and run its experiment.
    Run {
        /// Path to the JSON configuration.
        config: PathBuf,
        /// Override the configured degree list (comma-separated).
        #[arg(long = "n", value_delimiter = ',')]
        n_list: Option<Vec<usize>>,
        /// Override the configured master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the configured output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and validate a configuration without running it.
    Validate {
        /// Path to the JSON configuration.
        config: PathBuf,
    },
    /// Emit matplotlib scripts next to existing artifacts.
    Plots {
        /// Artifact directory of a previous run.
        dir: PathBuf,
    },
}

fn config_base(path: &Path) -> PathBuf {
    path.parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Commands::Run { config, n_list, seed, out } => {
            let (mut cfg, bytes) = config::Config::from_path(&config)?;
            let mut extra_flags: BTreeMap<String, serde_json::Value> = BTreeMap::new();
            if let Some(n_list) = n_list {
                extra_flags.insert("n_list_override".into(), serde_json::json!(n_list));
                cfg.n_list = n_list;
            }
            if let Some(seed) = seed {
                extra_flags.insert("seed_override".into(), serde_json::json!(seed));
                cfg.seed = Some(seed);
            }
            let out_dir = out
                .or_else(|| cfg.out.clone())
                .ok_or_else(|| {
                    CliError::Validation(
                        "no output directory: set `out` in the config or pass --out".into(),
                    )
                })?;
            let plan = config::validate(&cfg, &config_base(&config))?;
            runner::run(&plan, &out_dir, &bytes, &extra_flags)
        }
        Commands::Validate { config } => {
            let (cfg, _) = config::Config::from_path(&config)?;
            config::validate(&cfg, &config_base(&config))?;
            println!("ok");
            Ok(())
        }
        Commands::Plots { dir } => {
            let count = plots::emit(&dir)?;
            println!("wrote {count} plot scripts to {}", dir.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    if let Ok(threads) = std::env::var("EXCC_THREADS") {
        match threads.trim().parse::<usize>() {
            Ok(t) if t >= 1 => {
                // A global pool can only be installed once; a failure
                // here means tests or a harness already did so. Serial
                // builds accept the variable and ignore the cap.
                #[cfg(feature = "parallel")]
                {
                    let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
                }
                #[cfg(not(feature = "parallel"))]
                let _ = t;
            }
            _ => {
                eprintln!("validation error: EXCC_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("validation error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
    }
}
