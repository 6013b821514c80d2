use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use degenwave_cli::commands::{self, Engine, Outcome};
use degenwave_cli::config::Scenario;

#[derive(Parser)]
#[command(name = "degenwave", version, about = "Degenerate wave equation: spectra, observability, control")]
struct Cli {
    /// Scenario file (`key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides `output_dir` from the config.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Modal,
    Fd,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalue table.
    Eigen,
    /// Free evolution with the modal and/or finite-difference engine.
    Solve {
        #[arg(long, value_enum, default_value_t = EngineArg::Both)]
        engine: EngineArg,
    },
    /// Controllability time, Gram spectrum and observability constants.
    Observe,
    /// Boundary control from the moment problem, verified by finite differences.
    Control,
    /// Translated-bump quotient for alpha >= 2.
    Counterexample,
}

fn load(cli: &Cli) -> Result<Scenario> {
    let path = cli.config.as_ref().context("--config PATH is required")?;
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut s = Scenario::parse(&text).with_context(|| format!("in {}", path.display()))?;
    if let Ok(seed) = std::env::var("DEGENWAVE_SEED") {
        s.seed = seed
            .trim()
            .parse()
            .with_context(|| format!("DEGENWAVE_SEED = `{seed}` is not an unsigned integer"))?;
    }
    if let Some(dir) = &cli.output_dir {
        s.output_dir = dir.clone();
    }
    Ok(s)
}

fn run(cli: &Cli) -> Result<()> {
    let s = load(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build()
        .context("building worker pool")?;
    let outcome: Outcome = pool.install(|| match cli.command {
        Command::Eigen => commands::eigen(&s),
        Command::Solve { engine } => commands::solve(
            &s,
            match engine {
                EngineArg::Modal => Engine::Modal,
                EngineArg::Fd => Engine::Fd,
                EngineArg::Both => Engine::Both,
            },
        ),
        Command::Observe => commands::observe(&s),
        Command::Control => commands::control(&s),
        Command::Counterexample => commands::counterexample(&s),
    })?;
    for w in &outcome.warnings {
        eprintln!("{w}");
    }
    std::fs::create_dir_all(&s.output_dir).with_context(|| format!("creating {}", s.output_dir.display()))?;
    for a in &outcome.artifacts {
        let path = s.output_dir.join(&a.name);
        std::fs::write(&path, &a.contents).with_context(|| format!("writing {}", path.display()))?;
    }
    for line in &outcome.summary {
        println!("{line}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e) as u8)
        }
    }
}
