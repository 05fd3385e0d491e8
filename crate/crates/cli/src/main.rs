//! Workbench command line: sieve caching, exact-identity suites,
//! representation campaigns, and diagnostic sweeps, all driven by one
//! key = value config file.

mod cache;
mod commands;
mod config;
mod output;

use std::path::PathBuf;

use config::{ConfigError, RunConfig};

/// Exit codes: 0 success, 1 failure while running, 2 configuration error.
pub enum CliError {
    Config(String),
    Failure(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<goldbach_core::Error> for CliError {
    fn from(e: goldbach_core::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<cache::CacheError> for CliError {
    fn from(e: cache::CacheError) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

const USAGE: &str = "usage: goldbach <command> [--config PATH] [--out DIR] [--threads N] [--seed N]

commands:
  primes      sieve a range and persist the bit-packed cache
  identities  run the exact-identity suite (exit 1 on any failure)
  verify      mixed-representation campaign over a band of odd targets
  scaling     negligibility and bound diagnostics across scales
  singular    singular series and its twisted refinement per target
  buchstab    tabulate the Buchstab function
  arcs        arc geometry and grid coverage
  expsum      export one exponential-sum grid as CSV";

fn main() {
    match run() {
        Ok(()) => {}
        Err(e) => {
            match &e {
                CliError::Config(msg) => eprintln!("config error: {msg}"),
                CliError::Failure(msg) => eprintln!("error: {msg}"),
            }
            std::process::exit(e.exit_code());
        }
    }
}

fn run() -> Result<(), CliError> {
    let mut args = std::env::args().skip(1);
    let Some(command) = args.next() else {
        eprintln!("{USAGE}");
        return Err(CliError::Config("missing command".into()));
    };
    if command == "--help" || command == "-h" {
        println!("{USAGE}");
        return Ok(());
    }

    let mut config_path: Option<PathBuf> = None;
    let mut out_dir: Option<PathBuf> = None;
    let mut threads: Option<usize> = None;
    let mut seed: Option<u64> = None;
    while let Some(flag) = args.next() {
        let mut value = |name: &str| {
            args.next()
                .ok_or_else(|| CliError::Config(format!("{name} needs a value")))
        };
        match flag.as_str() {
            "--config" => config_path = Some(PathBuf::from(value("--config")?)),
            "--out" => out_dir = Some(PathBuf::from(value("--out")?)),
            "--threads" => {
                threads = Some(
                    value("--threads")?
                        .parse()
                        .map_err(|_| CliError::Config("bad --threads value".into()))?,
                )
            }
            "--seed" => {
                seed = Some(
                    value("--seed")?
                        .parse()
                        .map_err(|_| CliError::Config("bad --seed value".into()))?,
                )
            }
            "--help" | "-h" => {
                println!("{USAGE}");
                return Ok(());
            }
            other => return Err(CliError::Config(format!("unknown flag {other}"))),
        }
    }

    let mut cfg = match &config_path {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(dir) = out_dir {
        cfg.out_dir = dir;
    }
    if let Some(t) = threads {
        cfg.threads = t;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if cfg.threads > 0 {
        // a later init in the same process is fine to ignore
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global();
    }
    std::fs::create_dir_all(&cfg.out_dir)?;

    match command.as_str() {
        "primes" => commands::primes::run(&cfg),
        "identities" => commands::identities::run(&cfg),
        "verify" => commands::verify::run(&cfg),
        "scaling" => commands::scaling::run(&cfg),
        "singular" => commands::singular::run(&cfg),
        "buchstab" => commands::buchstab::run(&cfg),
        "arcs" => commands::arcs::run(&cfg),
        "expsum" => commands::expsum::run(&cfg),
        other => {
            eprintln!("{USAGE}");
            Err(CliError::Config(format!("unknown command {other}")))
        }
    }
}
