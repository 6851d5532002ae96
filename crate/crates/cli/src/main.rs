use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, ValueEnum};
use rees_core::config::parse_config_with;
use rees_core::driver::{run, Command, RunOptions};
use rees_core::report::{canonical_json, render_text};

/// Exact Hochschild (co)homology, Morita witnesses and structural checks for
/// Rees matrix semigroup algebras.
#[derive(Parser, Debug)]
#[command(name = "rees", version)]
struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    command: CommandArg,
    /// Instance file, in the text format or JSON.
    config: PathBuf,
    /// Also write the report as canonical JSON to this path.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Highest Hochschild degree; the top degree is reported as truncated.
    #[arg(long, value_name = "N")]
    max_degree: Option<usize>,
    /// Corner idempotent position as `i,λ` (1-based).
    #[arg(long, value_name = "I,LAMBDA", value_parser = parse_position)]
    idempotent: Option<(usize, usize)>,
    /// Lift the instance and chain-space size guards.
    #[arg(long)]
    force: bool,
    /// Cross-check homology against the dense brute-force oracle.
    #[arg(long)]
    oracle: bool,
    /// Add a randomized spot check of algebraic identities with this seed.
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
    /// Record wall-clock timings (makes the report run-dependent).
    #[arg(long)]
    timings: bool,
    /// Do not print the text report.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CommandArg {
    Hh,
    Morita,
    Checks,
    All,
}

fn parse_position(s: &str) -> Result<(usize, usize), String> {
    let (i, l) = s.split_once(',').ok_or("expected `i,λ`")?;
    let parse = |t: &str| match t.trim().parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("{t:?} is not a positive index")),
        Ok(n) => Ok(n - 1),
    };
    Ok((parse(i)?, parse(l)?))
}

const EXIT_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_SIZE_GUARD: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    let text = match std::fs::read_to_string(&cli.config).with_context(|| format!("reading {}", cli.config.display())) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let config = match parse_config_with(&text, cli.force) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}: {e}", cli.config.display());
            return ExitCode::from(if e.is_size_guard() { EXIT_SIZE_GUARD } else { EXIT_INPUT });
        }
    };
    let command = match cli.command {
        CommandArg::Hh => Command::Hh,
        CommandArg::Morita => Command::Morita,
        CommandArg::Checks => Command::Checks,
        CommandArg::All => Command::All,
    };
    let opts = RunOptions {
        max_degree: cli.max_degree,
        idempotent: cli.idempotent,
        force: cli.force,
        oracle: cli.oracle,
        timings: cli.timings,
        seed: cli.seed,
    };
    let report = match run(command, &config, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(if e.is_size_guard() { EXIT_SIZE_GUARD } else { EXIT_INPUT });
        }
    };
    if !cli.quiet {
        print!("{}", render_text(&report));
    }
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, canonical_json(&report)) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(EXIT_INPUT);
        }
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED)
    }
}
