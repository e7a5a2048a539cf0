use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use modelset_cli::{list_examples, run, Experiment, RunError, RunOptions, Task};

#[derive(Parser)]
#[command(
    name = "modelset",
    version,
    about = "Model-set combs: autocorrelation, decomposition and diffraction checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task listed in the config.
    Run(RunArgs),
    /// Run only the verification task of the config.
    Verify(RunArgs),
    /// List the bundled schemes and fixtures.
    ListExamples,
}

#[derive(Args)]
struct RunArgs {
    config: PathBuf,
    /// Output directory, overriding the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for frequency sweeps.
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for random weights and probes, overriding the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write a stick plot of the spectrum.
    #[arg(long)]
    svg: bool,
    /// Logarithmic intensity axis for the stick plot.
    #[arg(long)]
    log_scale: bool,
}

fn execute(args: RunArgs, tasks: Option<Vec<Task>>) -> Result<bool, RunError> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| RunError::Io(e.to_string()))?;
    }
    let exp = Experiment::load(&args.config)?;
    let opts = RunOptions {
        out: args.out,
        seed: args.seed,
        svg: args.svg,
        log_scale: args.log_scale,
        tasks,
    };
    let outcome = run(&exp, &opts)?;
    for line in outcome.report_lines() {
        println!("{line}");
    }
    Ok(!outcome.failed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::ListExamples => {
            for line in list_examples() {
                println!("{line}");
            }
            Ok(true)
        }
        Command::Run(args) => execute(args, None),
        Command::Verify(args) => execute(args, Some(vec![Task::Verify])),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
