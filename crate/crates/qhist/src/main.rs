use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qhist::scenario::{Backend, Overrides, Scenario};
use qhist::{commands, CliResult};

#[derive(Parser)]
#[command(
    name = "qhist",
    version,
    about = "Erase qubits into a continuous-variable history mode"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Erase prepared qubits one by one and dump the CV wave after each step.
    EraseDemo(Common),
    /// Run the seeded property suites and write a JSON report.
    Validate(Common),
    /// Run a program and write per-step metrics and CV dumps.
    Processor(Common),
    /// Report ancilla and CV resources for a program.
    Resource(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario JSON file.
    scenario: PathBuf,
    #[arg(long, value_enum)]
    backend: Option<Backend>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_level: Option<u32>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Tolerance applied to every validation suite.
    #[arg(long)]
    tolerance: Option<f64>,
}

type Handler = fn(&Scenario, &Path, &mut dyn Write) -> CliResult<()>;

fn run(cli: Cli) -> CliResult<()> {
    let (common, cmd): (&Common, Handler) = match &cli.command {
        Command::EraseDemo(c) => (c, commands::erase_demo),
        Command::Validate(c) => (c, commands::validate),
        Command::Processor(c) => (c, commands::processor),
        Command::Resource(c) => (c, commands::resource),
    };
    let overrides = Overrides {
        backend: common.backend,
        seed: common.seed,
        max_level: common.max_level,
        tolerance: common.tolerance,
    };
    let scenario = Scenario::load(&common.scenario, &overrides)?;
    cmd(&scenario, &common.out_dir, &mut std::io::stdout().lock())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qhist: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
