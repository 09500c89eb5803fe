//! `regensim`: perfect samples, return-probability tables, bounds, renewal
//! times and interval-chain trajectories from a JSON run configuration.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::CliError;

/// Environment variable read for the master seed when neither `--seed` nor
/// the config sets one.
pub const SEED_ENV: &str = "REGENSIM_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "regensim",
    version,
    about = "Regenerative perfect simulation of chains with complete connections"
)]
struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the effective configuration (defaults and overrides applied) and exit.
    #[arg(long, global = true)]
    dump_config: bool,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format, overriding the config.
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<config::Format>,
    #[command(subcommand)]
    command: Option<Command>,
}

fn parse_format(s: &str) -> Result<config::Format, String> {
    match s {
        "json-lines" => Ok(config::Format::JsonLines),
        "csv" => Ok(config::Format::Csv),
        _ => Err(format!("unknown format {s:?}, expected json-lines or csv")),
    }
}

#[derive(Args, Debug, Clone)]
struct Sampling {
    /// Master seed; replicate seeds are derived from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Abort a run once the regeneration search passes this many sites.
    #[arg(long)]
    max_depth: Option<usize>,
    /// Run even when the configured regime does not support the command.
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Perfect samples of the window [from, to].
    Sample {
        #[arg(long, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, allow_hyphen_values = true)]
        to: i64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[command(flatten)]
        run: Sampling,
    },
    /// Table of beta_m, f_m and rho_m.
    Rho {
        #[arg(long)]
        max_m: usize,
    },
    /// Regeneration-depth tail and abort-bias bounds.
    Bounds {
        #[arg(long)]
        window_len: usize,
        /// Depth m for the tail bound, abort depth M for the bias bound.
        #[arg(long)]
        m: usize,
        /// Also report the loss-of-memory bound for conditioning this far before the window.
        #[arg(long)]
        memory_gap: Option<usize>,
        /// Bound on |f| for the loss-of-memory bound.
        #[arg(long, default_value_t = 1.0)]
        sup_norm: f64,
    },
    /// Renewal times in [from, to].
    Renewal {
        #[arg(long, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, allow_hyphen_values = true)]
        to: i64,
        #[command(flatten)]
        run: Sampling,
    },
    /// Interval-chain trajectory of a digit specification.
    Dary {
        #[arg(long)]
        resolution: usize,
        #[arg(long, default_value_t = 0)]
        steps: usize,
        /// Replay these digits from X = 0 instead of sampling.
        #[arg(long, value_delimiter = ',')]
        digits: Option<Vec<u32>>,
        /// Base for --digits without a config.
        #[arg(long)]
        base: Option<u32>,
        #[command(flatten)]
        run: Sampling,
    },
}

fn effective_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(f) = cli.format {
        config.format = Some(f);
    }
    let run = match &cli.command {
        Some(
            Command::Sample { run, .. } | Command::Renewal { run, .. } | Command::Dary { run, .. },
        ) => Some(run),
        _ => None,
    };
    if let Some(run) = run {
        if let Some(seed) = run.seed {
            config.seed = Some(seed);
        }
        if let Some(depth) = run.max_depth {
            if depth == 0 {
                return Err(CliError::Config("--max-depth must be at least 1".into()));
            }
            config.max_depth = depth;
        }
    }
    if config.seed.is_none() {
        if let Ok(v) = std::env::var(SEED_ENV) {
            let seed = v
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("{SEED_ENV}={v:?} is not a u64")))?;
            config.seed = Some(seed);
        }
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = effective_config(&cli)?;
    if cli.dump_config {
        println!("{}", config.to_json());
        return Ok(());
    }
    let Some(command) = cli.command else {
        return Err(CliError::Config("no subcommand given (see --help)".into()));
    };
    let out: Box<dyn std::io::Write> = match &cli.out {
        Some(path) => Box::new(std::io::BufWriter::new(std::fs::File::create(path)?)),
        None => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
    };
    match command {
        Command::Sample {
            from,
            to,
            count,
            run,
        } => commands::sample(&config, from, to, count, run.force, out),
        Command::Rho { max_m } => commands::rho(&config, max_m, out),
        Command::Bounds {
            window_len,
            m,
            memory_gap,
            sup_norm,
        } => commands::bounds(&config, window_len, m, memory_gap, sup_norm, out),
        Command::Renewal { from, to, run } => commands::renewal(&config, from, to, run.force, out),
        Command::Dary {
            resolution,
            steps,
            digits,
            base,
            run,
        } => commands::dary(&config, resolution, steps, digits, base, run.force, out),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("regensim: {e}");
        std::process::exit(e.exit_code());
    }
}
