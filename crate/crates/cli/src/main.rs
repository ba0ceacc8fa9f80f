use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};
use sct_cli::commands::{self, CliError, Output};
use sct_cli::format::load_automaton;
use sct_cli::service::{serve, Guidance};
use sct_core::modeling::search::Target;
use sct_core::sequences::{DEFAULT_MAX_COUNT, DEFAULT_MAX_LEN};

#[derive(Parser)]
#[command(
    name = "sct",
    version,
    about = "Supervisor synthesis for assembly sequence planning"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compose all plants and specifications of a model.
    Compose {
        model: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Synthesize the supremal controllable nonblocking supervisor.
    Synthesize {
        model: PathBuf,
        #[arg(long)]
        minimize: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a supervisor for controllability and nonblocking (exit 1 if not).
    Verify {
        model: PathBuf,
        #[arg(long)]
        supervisor: PathBuf,
    },
    /// List complete sequences of an automaton file.
    Enumerate {
        supervisor: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_LEN)]
        max_len: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_COUNT, value_parser = positive)]
        max_count: usize,
        /// One sequence per line (the default).
        #[arg(long)]
        lines: bool,
    },
    /// Render an automaton file as Graphviz DOT.
    ExportDot { file: PathBuf },
    /// Search precedence digraphs of the case study for given figures.
    FindDigraph {
        /// Composite states,transitions.
        #[arg(long, value_parser = pair, default_value = "33,45")]
        target_composite: (usize, usize),
        /// Minimized supervisor states,transitions.
        #[arg(long, value_parser = pair, default_value = "25,34")]
        target_supervisor: (usize, usize),
        #[arg(long, default_value_t = 1)]
        target_blocking: usize,
        /// How many non-matching candidates to report.
        #[arg(long, default_value_t = 10)]
        nearest: usize,
    },
    /// Serve the REST guidance API for a supervisor file.
    Serve {
        supervisor: PathBuf,
        #[arg(long, env = "PORT", default_value_t = 8080)]
        port: u16,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected N,M")?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((parse(a)?, parse(b)?))
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let json = cli.json;
    match cli.command {
        Command::Compose { model, out } => commands::compose(&model, out.as_deref(), json),
        Command::Synthesize {
            model,
            minimize,
            out,
        } => commands::synthesize_cmd(&model, minimize, out.as_deref(), json),
        Command::Verify { model, supervisor } => commands::verify(&model, &supervisor, json),
        Command::Enumerate {
            supervisor,
            max_len,
            max_count,
            lines: _,
        } => commands::enumerate(&supervisor, max_len, max_count, json),
        Command::ExportDot { file } => commands::export_dot_cmd(&file, json),
        Command::FindDigraph {
            target_composite,
            target_supervisor,
            target_blocking,
            nearest,
        } => {
            let target = Target {
                composite_states: target_composite.0,
                composite_transitions: target_composite.1,
                blocking_states: target_blocking,
                supervisor_states: target_supervisor.0,
                supervisor_transitions: target_supervisor.1,
            };
            commands::find_digraph_cmd(target, nearest, json)
        }
        Command::Serve { supervisor, port } => {
            let file = load_automaton(&supervisor)?;
            let guidance = Guidance::new(file.automaton, file.tasks);
            let rt = tokio::runtime::Runtime::new().expect("tokio runtime");
            match rt.block_on(serve(guidance, port)) {
                Ok(()) => Ok(Output {
                    stdout: String::new(),
                    code: 0,
                }),
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(Output {
                        stdout: String::new(),
                        code: 2,
                    })
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.json && matches!(cli.command, Command::Enumerate { lines: true, .. }) {
        Cli::command()
            .error(
                clap::error::ErrorKind::ArgumentConflict,
                "--json and --lines are exclusive",
            )
            .exit();
    }
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
