use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use musielak::campaigns::{run, write_outputs};
use musielak::config::{Command, ExperimentConfig, Format};
use musielak::{Error, Result};

/// Musielak-Orlicz norms from permutation averages: constructions and
/// verification campaigns.
#[derive(Debug, Parser)]
#[command(name = "musielak", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// JSON campaign config; defaults are used when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Overrides the seed in the config.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Overrides the output directory in the config.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads (0 = rayon's default).
    #[arg(long, global = true, env = "MUSIELAK_THREADS", value_name = "N")]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Sub {
    /// Orlicz functions from weight matrices, or matrices from power systems.
    Construct,
    /// Permutation average vs the norm of the generated system.
    #[command(name = "verify-thm1")]
    VerifyThm1,
    /// Permutation average of the constructed matrix vs the power-system norm.
    #[command(name = "verify-thm2")]
    VerifyThm2,
    /// matrix → functions → matrix.
    Roundtrip,
    /// Exact sandwiches and oracle comparisons.
    LemmaOracles,
    /// Distortion of the embedding into L_1.
    EmbedReport,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Self {
        match s {
            Sub::Construct => Self::Construct,
            Sub::VerifyThm1 => Self::VerifyThm1,
            Sub::VerifyThm2 => Self::VerifyThm2,
            Sub::Roundtrip => Self::Roundtrip,
            Sub::LemmaOracles => Self::LemmaOracles,
            Sub::EmbedReport => Self::EmbedReport,
        }
    }
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Both,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Self::Json,
            FormatArg::Csv => Self::Csv,
            FormatArg::Both => Self::Both,
        }
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which is reserved for failed checks
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn execute(cli: Cli) -> Result<bool> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::from_path(path)?,
        None => ExperimentConfig::default(),
    };
    let command = Command::from(cli.command);
    match config.command {
        Some(c) if c != command => {
            return Err(Error::Config(format!(
                "config is for {c}, but {command} was requested"
            )));
        }
        _ => config.command = Some(command),
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out) = cli.out {
        config.output.dir = out;
    }
    if let Some(format) = cli.format {
        config.output.format = format.into();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Pool(e.to_string()))?;
    let (report, outcome) = pool.install(|| run(&config))?;
    let written = write_outputs(&report, &outcome, &config.output.dir, config.output.format)?;
    for check in &report.checks {
        let status = if check.pass { "PASS" } else { "FAIL" };
        println!("{status} {}: {}", check.name, check.detail);
    }
    println!(
        "wrote {} files to {}",
        written.len(),
        config.output.dir.display()
    );
    Ok(report.pass)
}
