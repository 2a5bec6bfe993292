use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use confsym::cli::{emit_report, parse_taskfile, run_tasks, solve_entry, suite_report, Entry, Format, Report, Status};

#[derive(Parser)]
#[command(name = "confsym", version, about = "Exact verification of Laplacian symmetries and conformally invariant pairings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: OutFormat,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task in a task file.
    Verify { taskfile: PathBuf },
    /// Run the full battery of checks.
    Suite {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        order: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Solve for flat conformal Killing tensors.
    Solve {
        #[command(subcommand)]
        what: SolveCommand,
    },
    /// Exploratory checks whose outcome is reported, not asserted.
    Experiment {
        #[command(subcommand)]
        what: ExperimentCommand,
    },
}

#[derive(Subcommand)]
enum SolveCommand {
    /// Basis of conformal Killing fields (valence 1) or tensors (valence 2).
    Ckt {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        valence: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Commutation of the Yamabe operator with second-order symmetries on
    /// conformally flat backgrounds.
    YamabeCkt {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        order: u32,
        #[arg(long, default_value_t = 4)]
        samples: usize,
    },
}

fn single(id: &str, r: confsym::Result<Entry>) -> Report {
    let e = r.unwrap_or_else(|e| Entry::new(id, Status::Error, e.to_string()));
    Report { version: 1, tasks: vec![e] }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match cli.command {
        Command::Verify { taskfile } => {
            let text = match fs::read_to_string(&taskfile) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("confsym: {}: {e}", taskfile.display());
                    return ExitCode::from(2);
                }
            };
            match parse_taskfile(&text) {
                Ok(tf) => run_tasks(&tf),
                Err(e) => {
                    eprintln!("confsym: {}: {e}", taskfile.display());
                    return ExitCode::from(2);
                }
            }
        }
        Command::Suite { n, order, seed } => suite_report(n, order, seed),
        Command::Solve { what: SolveCommand::Ckt { n, valence, max_degree } } => {
            single("solve-ckt", solve_entry("solve-ckt", n, valence, max_degree))
        }
        Command::Experiment { what: ExperimentCommand::YamabeCkt { n, seed, order, samples } } => {
            let mut tf = confsym::cli::TaskFile::new(n);
            tf.order = order;
            tf.seed = seed;
            tf.tasks.push(confsym::cli::Task::ExperimentYamabeCkt { samples });
            let mut r = run_tasks(&tf);
            r.tasks[0].id = "experiment-yamabe-ckt".into();
            r
        }
    };
    let format = match cli.format {
        OutFormat::Text => Format::Text,
        OutFormat::Json => Format::Json,
    };
    let mut text = emit_report(&report, format);
    if format == Format::Json {
        text.push('\n');
    }
    match cli.out {
        Some(path) => {
            if let Err(e) = fs::write(&path, text) {
                eprintln!("confsym: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
