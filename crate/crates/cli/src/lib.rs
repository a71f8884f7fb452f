//! Command-line front end: reads a JSON [`RunConfig`], runs one experiment
//! and writes a CSV or JSON table plus a `<output>.meta.json` sidecar.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;
use serde_json::json;

pub use config::{Experiment, Format, Grid, RunConfig};
pub use error::CliError;
pub use output::Table;

#[derive(Debug, Clone, Parser)]
#[command(name = "phased-dicke", version, about = "Two driven atoms with a spatially varying laser phase")]
pub struct Args {
    /// JSON run configuration
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Overrides the experiment named in the config
    #[arg(long, value_enum)]
    pub experiment: Option<Experiment>,

    /// Output file; stdout when absent from both flags and config
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Worker threads for sweep points (0: one per core)
    #[arg(long, default_value_t = 0)]
    pub threads: usize,

    /// Reserved; recorded in the sidecar only
    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long)]
    pub verbose: bool,
}

/// The effective configuration after applying flag overrides.
pub fn effective_config(args: &Args) -> Result<RunConfig, CliError> {
    let mut cfg = match (&args.config, args.experiment) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, Some(e)) => RunConfig::new(e),
        (None, None) => {
            return Err(CliError::Config {
                field: None,
                message: "either --config or --experiment is required".into(),
            })
        }
    };
    if let Some(e) = args.experiment {
        cfg.experiment = e;
    }
    if let Some(p) = &args.out {
        cfg.output_path = Some(p.clone());
    }
    if let Some(f) = args.format {
        cfg.format = f;
    }
    cfg.metadata = None;
    Ok(cfg.resolved())
}

pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_os_string();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn sidecar(cfg: &RunConfig, args: &Args) -> RunConfig {
    let created = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut meta = cfg.clone();
    meta.metadata = Some(json!({
        "artifact": "phased-dicke",
        "version": env!("CARGO_PKG_VERSION"),
        "created_unix": created,
        "threads": args.threads,
        "seed": args.seed,
        "tolerances": {
            "steady_state_singular_ratio": 1e-8,
            "stationarity": 1e-8,
            "density_hermiticity": 1e-10,
            "density_trace": 1e-10,
            "density_min_eigenvalue": -1e-8,
            "csv_significant_digits": 17
        }
    }));
    meta
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn run(args: &Args) -> Result<(), CliError> {
    let cfg = effective_config(args)?;
    if args.verbose {
        eprintln!(
            "experiment {} with {:?}",
            cfg.experiment.name(),
            cfg.system
        );
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| CliError::config("--threads", e.to_string()))?;
    let start = std::time::Instant::now();
    let table = pool.install(|| experiments::execute(&cfg))?;
    if args.verbose {
        eprintln!("{} rows in {:.2?}", table.rows.len(), start.elapsed());
    }
    let text = match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match &cfg.output_path {
        Some(path) => {
            write(path, &text)?;
            let meta = serde_json::to_string_pretty(&sidecar(&cfg, args)).expect("configs serialize");
            write(&sidecar_path(path), &(meta + "\n"))?;
            if args.verbose {
                eprintln!("wrote {}", path.display());
            }
        }
        None => print!("{text}"),
    }
    Ok(())
}
