use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use fermidark_cli::{preset, run_scenario, write_outputs, Scenario};

#[derive(Parser)]
#[command(name = "fermidark", version, about = "Dark-state dynamics of doubly-filled fermionic lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory, overriding output.directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for sweeps (1 = serial, 0 = all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print or save a ready-made scenario.
    Preset {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(config: PathBuf, out: Option<PathBuf>, threads: Option<usize>) -> Result<()> {
    let text = std::fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
    let mut scenario = Scenario::from_json(&text).with_context(|| format!("parsing {}", config.display()))?;
    if let Some(dir) = &out {
        scenario.output.directory = dir.to_string_lossy().into_owned();
    }
    if let (Some(n), Some(integ)) = (threads, scenario.integration.as_mut()) {
        integ.threads = n;
    }
    let outcome = run_scenario(&scenario)?;
    let dir = PathBuf::from(&scenario.output.directory);
    write_outputs(&scenario, &outcome, &dir)?;
    for line in &outcome.report {
        println!("{line}");
    }
    println!("outputs written to {}", dir.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out, threads } => run(config, out, threads),
        Command::Preset { name, out } => preset(&name).and_then(|s| {
            let text = s.to_json() + "\n";
            match out {
                Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
