use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lintrack::checker::Mode;
use lintrack::cli::{cmd_check, cmd_trace, cmd_witness, JobConfig, OutputFormat};

#[derive(Parser)]
#[command(
    name = "lintrack",
    about = "Bounded linearizability verifier based on tracking all possible linearizations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check an implementation for linearizability up to a depth bound.
    Check {
        /// Implementation source file.
        implementation: PathBuf,
        /// Number of processes.
        #[arg(long, default_value_t = 2)]
        procs: usize,
        /// Schedule depth bound (events per run).
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        /// Seed for random mode.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Schedules to sample in random mode.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        /// Worker count for exhaustive exploration.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Record tracker provenance while exploring.
        #[arg(long)]
        provenance: bool,
        /// Report the globally shortest counterexample.
        #[arg(long)]
        minimize: bool,
        /// Disable visited-set pruning.
        #[arg(long)]
        no_dedup: bool,
        /// Abort after exploring this many states.
        #[arg(long)]
        state_budget: Option<u64>,
    },
    /// Extract a linearization witness for a recorded run.
    Witness {
        implementation: PathBuf,
        /// Trace file (JSON events, see the trace schema in the README).
        trace: PathBuf,
        /// Number of processes (defaults to the highest process in the trace).
        #[arg(long, default_value_t = 1)]
        procs: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Replay a schedule, dumping the configuration and tracker per step.
    Trace {
        implementation: PathBuf,
        /// Schedule file (JSON events, see the trace schema in the README).
        schedule: PathBuf,
        /// Number of processes (defaults to the highest process in the schedule).
        #[arg(long, default_value_t = 1)]
        procs: usize,
        /// Include full tracker and base-state contents per step.
        #[arg(long)]
        verbose: bool,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
}

fn format_of(arg: FormatArg) -> OutputFormat {
    match arg {
        FormatArg::Text => OutputFormat::Text,
        FormatArg::Json => OutputFormat::Json,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Check {
            implementation,
            procs,
            depth,
            mode,
            seed,
            trials,
            format,
            jobs,
            provenance,
            minimize,
            no_dedup,
            state_budget,
        } => {
            let mut cfg = JobConfig::new(implementation, procs, depth);
            cfg.mode = match mode {
                ModeArg::Exhaustive => Mode::Exhaustive,
                ModeArg::Random => Mode::Random { seed, trials },
            };
            cfg.output = format_of(format);
            cfg.jobs = jobs;
            cfg.record_provenance = provenance;
            cfg.minimize = minimize;
            cfg.dedup = !no_dedup;
            cfg.state_budget = state_budget;
            cmd_check(&cfg)
        }
        Command::Witness {
            implementation,
            trace,
            procs,
            format,
        } => {
            let mut cfg = JobConfig::new(implementation, procs, 1);
            cfg.output = format_of(format);
            cfg.record_provenance = true;
            cmd_witness(&cfg, &trace)
        }
        Command::Trace {
            implementation,
            schedule,
            procs,
            verbose,
            format,
        } => {
            let mut cfg = JobConfig::new(implementation, procs, 1);
            cfg.output = format_of(format);
            cmd_trace(&cfg, &schedule, verbose)
        }
    };
    print!("{}", outcome.rendered);
    ExitCode::from(outcome.exit_code as u8)
}
