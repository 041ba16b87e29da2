use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cournot_cli::commands::{
    cmd_bifurcate, cmd_compare, cmd_equilibrium, cmd_simulate, cmd_stability, cmd_zone, RunSettings, ScanFlags,
};
use cournot_cli::output::RunArtifacts;
use cournot_cli::scenario::{parse_scenario, Scenario};
use cournot_cli::Result;
use cournot_core::model::IterateMode;

/// Multi-market Cournot duopoly with scale effects: simulation and stability analysis.
#[derive(Debug, Parser)]
#[command(name = "cournot", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario document (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also write SVG plots.
    #[arg(long)]
    svg: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iterate the best-response map and write the trajectory.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        mode: Option<IterateMode>,
    },
    /// Solve for the Cournot-Nash equilibrium.
    Equilibrium {
        #[command(flatten)]
        common: Common,
    },
    /// Spectrum of the Jacobian and stability class.
    Stability {
        #[command(flatten)]
        common: Common,
    },
    /// Sweep d and record post-transient orbit samples.
    Bifurcate {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        d_lo: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        d_hi: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        transient: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        mode: Option<IterateMode>,
    },
    /// Stability interval of d for each market count.
    Zone {
        #[arg(long, default_value_t = 1)]
        m_min: usize,
        #[arg(long, default_value_t = 10)]
        m_max: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        svg: bool,
    },
    /// Run the coupled model next to independent single-market baselines.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        mode: Option<IterateMode>,
    },
}

fn load(path: &Path) -> Result<Scenario> {
    let scenario = parse_scenario(path)?;
    for rule in &scenario.warnings {
        eprintln!("warning: [{}] {rule}", rule.id());
    }
    Ok(scenario)
}

fn report(artifacts: &RunArtifacts) {
    for f in &artifacts.files {
        println!("wrote {}", f.display());
    }
    println!("wrote {}", artifacts.manifest.display());
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { common, steps, mode } => {
            let s = load(&common.scenario)?;
            let settings = RunSettings::resolve(&s, steps, mode)?;
            report(&cmd_simulate(&s, settings, &common.out, common.svg)?);
        }
        Command::Equilibrium { common } => {
            let s = load(&common.scenario)?;
            let (nash, artifacts) = cmd_equilibrium(&s, &common.out)?;
            println!("{nash}");
            report(&artifacts);
        }
        Command::Stability { common } => {
            let s = load(&common.scenario)?;
            let (summary, artifacts) = cmd_stability(&s, &common.out, common.svg)?;
            println!("{summary}");
            report(&artifacts);
        }
        Command::Bifurcate { common, d_lo, d_hi, points, transient, samples, mode } => {
            let s = load(&common.scenario)?;
            let scan = ScanFlags { d_lo, d_hi, points, transient, samples, mode }.resolve(&s)?;
            report(&cmd_bifurcate(&s, &scan, &common.out, common.svg)?);
        }
        Command::Zone { m_min, m_max, out, svg } => report(&cmd_zone(m_min, m_max, &out, svg)?),
        Command::Compare { common, steps, mode } => {
            let s = load(&common.scenario)?;
            let settings = RunSettings::resolve(&s, steps, mode)?;
            report(&cmd_compare(&s, settings, &common.out, common.svg)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
