use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ctxlab::commands::{self, Output, ScenarioOptions};
use ctxlab::CliError;
use ctxlab_core::DEFAULT_TOL;

#[derive(Parser)]
#[command(
    name = "ctxlab",
    version,
    about = "POVM dilations, measurement contexts and Hardy-type inequalities"
)]
struct Cli {
    /// Tolerance for every validation in this run.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Built-in scenarios.
    Scenario {
        #[command(subcommand)]
        action: ScenarioAction,
    },
    /// POVM file checks.
    Povm {
        #[command(subcommand)]
        action: PovmAction,
    },
    /// Naimark-dilate the POVM of FILE and write a scenario file.
    Dilate {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Which outcomes share a measurement context.
    ContextGraph {
        file: PathBuf,
        /// Graphviz output.
        #[arg(long)]
        dot: bool,
        #[arg(long, conflicts_with = "dot")]
        json: bool,
    },
    /// Evaluate the rescaled-probability inequality of the hardy section.
    Inequality {
        file: PathBuf,
        /// Only this state from the states section.
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Largest achievable violation and a state attaining it.
    MaxViolation {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum ScenarioAction {
    Run {
        preset: String,
        #[arg(long, default_value = "VH")]
        basis: String,
        /// Merge the three A outcomes (D/A basis only).
        #[arg(long = "merge-a")]
        merge_a: bool,
        #[arg(long = "phi-init", default_value = "D")]
        phi_init: String,
        #[arg(long)]
        json: bool,
        /// Also write the scenario as a file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PovmAction {
    Check {
        file: PathBuf,
        /// Exit with status 3 when a residual exceeds the tolerance.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        json: bool,
    },
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let tol = cli.tol;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::input("--tol must be a positive number"));
    }
    match cli.command {
        Command::Scenario {
            action:
                ScenarioAction::Run {
                    preset,
                    basis,
                    merge_a,
                    phi_init,
                    json,
                    output,
                },
        } => commands::scenario_run(
            &preset,
            &ScenarioOptions {
                basis: commands::parse_basis(&basis)?,
                merge_a,
                phi_init: commands::parse_polarisation(&phi_init)?,
                json,
                output: output.as_deref(),
                tol,
            },
        ),
        Command::Povm {
            action: PovmAction::Check { file, strict, json },
        } => commands::povm_check(&file, strict, json, tol),
        Command::Dilate { file, output } => commands::dilate(&file, &output, tol),
        Command::ContextGraph { file, dot, json } => commands::context_graph(&file, dot, json, tol),
        Command::Inequality { file, state, json } => commands::inequality(&file, state.as_deref(), json, tol),
        Command::MaxViolation { file, json } => commands::max_violation_cmd(&file, json, tol),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
