//! Batch studies over geometric operators, driven by a JSON config.

pub mod commands;
pub mod config;
pub mod features;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::StudyConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    pub fn from_core(e: geoop::Error) -> CliError {
        CliError::Runtime(format!("{} ({})", e, e.code()))
    }
}

#[derive(Debug, Parser)]
#[command(name = "geoop", version, about = "Geometric-operator feature studies")]
pub struct Cli {
    /// JSON study configuration; omitted fields take their defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for per-design work; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// GO records for shape files or generated aerofoils.
    Features {
        /// `.dat`, `.obj`, `.stl` files or directories of them.
        inputs: Vec<PathBuf>,
        #[arg(long)]
        generate_airfoils: Option<usize>,
        #[arg(long)]
        order: Option<u32>,
    },
    /// KLE subspaces per combination with validity and diversity of samples.
    Reduce {
        features: PathBuf,
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        /// Comma-separated combinations, e.g. `P,P+M+K+FT`.
        #[arg(long, value_delimiter = ',')]
        combos: Option<Vec<String>>,
    },
    /// Sobol indices of aerofoil parameters for each GO combination.
    Sensitivity {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long = "epsilon")]
        epsilons: Vec<f64>,
    },
    /// GPR ablation over feature combinations.
    Surrogate {
        features: PathBuf,
        /// CSV with `design_id` and one label column.
        labels: PathBuf,
        #[arg(long, value_delimiter = ',')]
        combos: Option<Vec<String>>,
    },
    /// Diversity, quality and novelty of a generated batch.
    Quality {
        generated: PathBuf,
        training: PathBuf,
        #[arg(long)]
        gamma0: Option<f64>,
        #[arg(long)]
        kernel_length: Option<f64>,
    },
    /// Latin-hypercube aerofoils written as `.dat` files.
    GenAirfoils {
        #[arg(long)]
        n: Option<usize>,
    },
}

fn resolve(cli: &Cli) -> Result<StudyConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            StudyConfig::from_json(&text)?
        }
        None => StudyConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    match &cli.command {
        Command::Features { inputs, generate_airfoils, order } => {
            if !inputs.is_empty() {
                cfg.features.inputs = inputs.iter().map(|p| p.display().to_string()).collect();
            }
            if generate_airfoils.is_some() {
                cfg.features.generate_airfoils = *generate_airfoils;
            }
            if let Some(s) = order {
                cfg.go.moment_order = *s;
            }
        }
        Command::Reduce { threshold, samples, combos, .. } => {
            if let Some(t) = threshold {
                cfg.reduce.threshold = *t;
            }
            if let Some(n) = samples {
                cfg.reduce.samples = *n;
            }
            if let Some(c) = combos {
                cfg.reduce.combos = c.clone();
            }
        }
        Command::Sensitivity { n, epsilons } => {
            if let Some(n) = n {
                cfg.sensitivity.n = *n;
            }
            if !epsilons.is_empty() {
                cfg.sensitivity.epsilons = epsilons.clone();
            }
        }
        Command::Surrogate { combos, .. } => {
            if let Some(c) = combos {
                cfg.surrogate.combos = c.clone();
            }
        }
        Command::Quality { gamma0, kernel_length, .. } => {
            if let Some(g) = gamma0 {
                cfg.quality.gamma0 = *g;
            }
            if kernel_length.is_some() {
                cfg.quality.kernel_length = *kernel_length;
            }
        }
        Command::GenAirfoils { n } => {
            if let Some(n) = n {
                cfg.gen_airfoils.n = *n;
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = resolve(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    pool.install(|| commands::dispatch(&cli.command, &cfg, &cli.out))
}

/// Runs the tool and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("geoop: {e}");
            e.exit_code()
        }
    }
}
