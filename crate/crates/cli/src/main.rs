use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use mivor_cli::experiment::{self, REFERENCE_FILE};
use mivor_cli::{report, ExperimentConfig, Overrides};
use mivor_core::problems::calibrate_dropwave;

#[derive(Parser, Debug)]
#[command(name = "mivor", version, about = "Adaptive kriging classification of black-box responses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run replicated adaptive experiments and write CSV/JSON artifacts.
    Run(Common),
    /// Build the dense reference set for a problem and cache it as CSV.
    Reference(Common),
    /// Print a table of one or more summaries and optionally export curves.
    Report {
        /// summary.json files or directories containing one.
        #[arg(required = true)]
        summaries: Vec<PathBuf>,
        /// Write long-format error curves to this CSV file.
        #[arg(long)]
        curves: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// TOML experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base seed; replication k uses seed + k.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    replications: Option<usize>,
    /// Built-in problem: higdon, modified-higdon, michalewicz, dropwave.
    #[arg(long)]
    problem: Option<String>,
    /// Class limit L.
    #[arg(long, allow_hyphen_values = true)]
    limit: Option<f64>,
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let ov = Overrides {
            seed: self.seed,
            out: self.out.clone(),
            replications: self.replications,
            problem: self.problem.clone(),
            limit: self.limit,
        };
        ExperimentConfig::resolve(self.config.as_deref(), &ov)
    }
}

fn run(common: &Common) -> Result<ExitCode> {
    let cfg = common.resolve()?;
    let outcome = experiment::execute(&cfg)?;
    let items = [report::Labelled { label: cfg.problem.name.clone(), summary: outcome.summary.clone() }];
    print!("{}", report::table(&items));
    println!("artifacts written to {}", outcome.out.display());
    Ok(if outcome.all_succeeded() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn reference(common: &Common) -> Result<ExitCode> {
    let cfg = common.resolve()?;
    if let Some(reading) = cfg.dropwave_reading() {
        let cal = calibrate_dropwave(200);
        for c in &cal.candidates {
            let mark = if c.reading == reading { "*" } else { " " };
            println!("{mark} {}: minor fraction {:.4}, {} components", c.reading.describe(), c.minor_fraction, c.components);
        }
    }
    let reference = experiment::reference_for(&cfg)?;
    std::fs::create_dir_all(&cfg.experiment.out)
        .with_context(|| format!("creating {}", cfg.experiment.out.display()))?;
    let path = cfg.experiment.out.join(REFERENCE_FILE);
    experiment::write_reference(&reference, &path)?;
    println!(
        "{} points, {} minor, {} major -> {}",
        reference.len(),
        reference.counts.0,
        reference.counts.1,
        path.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(c) => run(&c),
        Command::Reference(c) => reference(&c),
        Command::Report { summaries, curves } => {
            let items = summaries.iter().map(|p| report::load(p)).collect::<Result<Vec<_>>>()?;
            print!("{}", report::table(&items));
            if let Some(path) = curves {
                report::write_curves(&items, &path)?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
