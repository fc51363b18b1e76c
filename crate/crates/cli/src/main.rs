use std::path::PathBuf;
use std::process::ExitCode;

use abphase::acceptance::{self, CRITERIA};
use abphase::config::ScenarioConfig;
use abphase::error::{CliError, Result};
use abphase::runner;
use abphase_core::solver::checkpoint;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "abphase",
    version,
    about = "Phase-accounting scenarios and acceptance checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario described by a TOML file.
    Run {
        config: PathBuf,
        /// Output directory; overrides `output.dir` in the file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run acceptance criteria: `all` (default), a name, or a number.
    Acceptance {
        selector: Option<String>,
        /// Also write per-check results to DIR/acceptance.csv.
        #[arg(long)]
        out: Option<PathBuf>,
        /// List the criteria and exit.
        #[arg(long)]
        list: bool,
    },
    /// Print the header of a checkpoint file.
    CheckpointDump { file: PathBuf },
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("ABPHASE_THREADS") {
        let n: usize = v.parse().map_err(|_| {
            CliError::Usage(format!(
                "ABPHASE_THREADS must be a positive integer, got '{v}'"
            ))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Run { config, out } => {
            let cfg = ScenarioConfig::load(&config)?;
            let dir = out
                .or_else(|| cfg.output.dir.clone())
                .unwrap_or_else(|| PathBuf::from("out"));
            let report = runner::run(&cfg, &dir)?;
            for (k, v) in &report.summary {
                println!("{k}: {v}");
            }
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            Ok(())
        }
        Command::Acceptance {
            selector,
            out,
            list,
        } => {
            if list {
                for c in CRITERIA {
                    println!("{:>2} {:<22} {}", c.id, c.selector, c.title);
                }
                return Ok(());
            }
            let criteria = acceptance::select(selector.as_deref())?;
            let outcomes = acceptance::run_suite(&criteria, |o| println!("{}", o.line()));
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                acceptance::write_results(&dir.join("acceptance.csv"), &outcomes)?;
            }
            let failed = outcomes.iter().filter(|o| !o.passed()).count();
            if failed > 0 {
                return Err(CliError::Acceptance(format!(
                    "{failed} of {} criteria failed",
                    outcomes.len()
                )));
            }
            println!("{} of {} criteria passed", outcomes.len(), outcomes.len());
            Ok(())
        }
        Command::CheckpointDump { file } => {
            let h = checkpoint::read_header(&file)?;
            println!("version: {}", h.version);
            println!("grid: {} x {}", h.nx, h.ny);
            println!("x: [{}, {})", h.x_min, h.x_max);
            println!("y: [{}, {})", h.y_min, h.y_max);
            println!("time: {}", h.time);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
