//! Batch front end: SNR sweeps, figure-reproduction recipes, config
//! validation, and rate-region dumps.

mod config;
mod region_cmd;
mod reproduce;
mod sweep;

use config::{parse_config, SweepConfig};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const USAGE: &str = "\
usage: twinsat <command> [options]

commands:
  sweep       run the configured SNR sweep; one CSV per strategy
  reproduce   emit the data and plot script for a known figure id
  validate    check a config file and report diagnostics; runs nothing
  region      emit rate-region points for the configured channel

options:
  --config PATH   sweep config file (flat key-value text)
  --out DIR       output directory (default: .)
  --seed N        override the config seed
  --jobs N        worker threads for grid cells (default: 1)
  --quiet         suppress progress output
  --figure ID     figure id for `reproduce` (or pass it positionally)

figure ids: fig3 fig4 fig5 fig6 fig7 fig8 fig9 fig10 fig13 fig14 fig15 table1 table2";

struct Args {
    command: String,
    config: Option<PathBuf>,
    out: PathBuf,
    seed: Option<u64>,
    jobs: usize,
    quiet: bool,
    figure: Option<String>,
}

fn parse_args() -> Result<Args, String> {
    let mut argv = std::env::args().skip(1);
    let command = argv.next().ok_or_else(|| USAGE.to_string())?;
    let mut args = Args {
        command,
        config: None,
        out: PathBuf::from("."),
        seed: None,
        jobs: 1,
        quiet: false,
        figure: None,
    };
    while let Some(arg) = argv.next() {
        match arg.as_str() {
            "--config" => {
                args.config = Some(PathBuf::from(
                    argv.next().ok_or("--config needs a path")?,
                ))
            }
            "--out" => args.out = PathBuf::from(argv.next().ok_or("--out needs a path")?),
            "--seed" => {
                args.seed = Some(
                    argv.next()
                        .ok_or("--seed needs a value")?
                        .parse()
                        .map_err(|_| "--seed must be an unsigned integer".to_string())?,
                )
            }
            "--jobs" => {
                args.jobs = argv
                    .next()
                    .ok_or("--jobs needs a value")?
                    .parse()
                    .map_err(|_| "--jobs must be a positive integer".to_string())?
            }
            "--quiet" => args.quiet = true,
            "--figure" => args.figure = Some(argv.next().ok_or("--figure needs an id")?),
            other if !other.starts_with('-') && args.figure.is_none() => {
                args.figure = Some(other.to_string())
            }
            other => return Err(format!("unknown option `{other}`\n\n{USAGE}")),
        }
    }
    Ok(args)
}

fn load_config(args: &Args) -> Result<SweepConfig, String> {
    let (text, base) = match &args.config {
        Some(path) => (
            std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?,
            path.parent().unwrap_or(Path::new(".")).to_path_buf(),
        ),
        None => (String::new(), PathBuf::from(".")),
    };
    let (mut cfg, diags) = parse_config(&text, &base);
    if !diags.is_empty() {
        let mut msg = String::from("invalid config:\n");
        for d in &diags {
            msg.push_str(&format!("  {d}\n"));
        }
        return Err(msg);
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn run() -> Result<(), String> {
    let args = parse_args()?;
    match args.command.as_str() {
        "sweep" => {
            let cfg = load_config(&args)?;
            let files = sweep::run_sweep(&cfg, &args.out, args.jobs, args.quiet)?;
            if !args.quiet {
                for f in files {
                    println!("{}", f.display());
                }
            }
            Ok(())
        }
        "reproduce" => {
            let id = args
                .figure
                .clone()
                .ok_or_else(|| format!("reproduce needs a figure id\n\n{USAGE}"))?;
            let seed = args.seed.unwrap_or(1);
            let files = reproduce::reproduce(&id, &args.out, seed, args.jobs, args.quiet)?;
            if !args.quiet {
                for f in files {
                    println!("{}", f.display());
                }
            }
            Ok(())
        }
        "validate" => {
            let (text, base) = match &args.config {
                Some(path) => (
                    std::fs::read_to_string(path)
                        .map_err(|e| format!("reading {}: {e}", path.display()))?,
                    path.parent().unwrap_or(Path::new(".")).to_path_buf(),
                ),
                None => return Err("validate needs --config".into()),
            };
            let (_, diags) = parse_config(&text, &base);
            if diags.is_empty() {
                println!("ok");
            } else {
                for d in &diags {
                    println!("{d}");
                }
            }
            Ok(())
        }
        "region" => {
            let cfg = load_config(&args)?;
            let files = region_cmd::run_region(&cfg, &args.out, args.quiet)?;
            if !args.quiet {
                for f in files {
                    println!("{}", f.display());
                }
            }
            Ok(())
        }
        other => Err(format!("unknown command `{other}`\n\n{USAGE}")),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("{msg}");
            ExitCode::FAILURE
        }
    }
}
