use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use cellfree_oas::schemes::Scheme;
use cellfree_oas_cli::config::{load_config, Overrides};
use cellfree_oas_cli::{output, plot};

#[derive(Parser)]
#[command(
    name = "oas-sim",
    version,
    about = "Cell-free massive MIMO-OFDM AP selection simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo experiment and write CDF/summary/manifest files.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        drops: Option<usize>,
        /// Comma-separated schemes, e.g. `full_ap,oas_dp`.
        #[arg(long, value_delimiter = ',')]
        scheme: Option<Vec<Scheme>>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, env = "OAS_SIM_OUT_DIR", default_value = "results")]
        out: PathBuf,
    },
    /// Plot every `cdf_*.csv` in a directory into one SVG.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Parse and validate a configuration without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run {
            config,
            seed,
            drops,
            scheme,
            workers,
            out,
        } => {
            let overrides = Overrides {
                seed,
                drops,
                schemes: scheme,
                workers,
            };
            let cfg = load_config(&config, &overrides)
                .with_context(|| format!("loading {}", config.display()))?;
            let artifacts = output::run(&cfg, &out)?;
            for path in artifacts
                .cdfs
                .iter()
                .chain([&artifacts.summary, &artifacts.manifest])
            {
                println!("{}", path.display());
            }
        }
        Command::Plot { input, out } => {
            let mut files: Vec<PathBuf> = std::fs::read_dir(&input)
                .with_context(|| format!("reading {}", input.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| {
                    p.file_name()
                        .and_then(|n| n.to_str())
                        .is_some_and(|n| n.starts_with("cdf_") && n.ends_with(".csv"))
                })
                .collect();
            files.sort();
            if files.is_empty() {
                bail!("no cdf_*.csv files in {}", input.display());
            }
            plot::plot(&files, &out)?;
            println!("{}", out.display());
        }
        Command::Validate { config } => {
            let cfg = load_config(&config, &Overrides::default())
                .with_context(|| format!("validating {}", config.display()))?;
            println!(
                "ok: {} curves, {} drops x {} realizations",
                cfg.system.curves().len(),
                cfg.system.drops,
                cfg.system.realizations
            );
        }
    }
    Ok(())
}
