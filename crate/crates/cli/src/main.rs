use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kuranishi_core::exec::Execution;
use kuranishi_core::problem::{Problem, ProblemSpec};
use kuranishi_core::report::{self, Options};
use kuranishi_core::{corpus, Error};

#[derive(Parser)]
#[command(
    name = "kuranishi",
    version,
    about = "Homotopy transfer and Kuranishi maps for finite DGLAs over Q"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Problem file (JSON).
    file: PathBuf,
    /// Truncation order, overriding the file's `max_degree`.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    max_degree: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    output: Format,
    /// Run single-threaded.
    #[arg(long)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the DGLA axioms and, if present, the contraction identities.
    Validate {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        output: Format,
    },
    /// Compute the twisting cochain and the perturbed differential.
    Deform(RunArgs),
    /// Kuranishi map, formal inverse, obstruction series and Kuranishi coalgebra.
    Kuranishi(RunArgs),
    /// Built-in example problems.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Subcommand)]
enum ExamplesAction {
    List,
    Dump { name: String },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. }
        | Error::BadRational(_)
        | Error::UnknownLabel(_)
        | Error::DuplicateLabel(_)
        | Error::Input(_) => 2,
        _ => 1,
    }
}

fn load(path: &PathBuf) -> Result<Problem, Error> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    ProblemSpec::parse(&text)?.to_problem()
}

fn options(a: &RunArgs) -> Options {
    Options {
        max_degree: a.max_degree.map(|n| n as usize),
        exec: if a.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    }
}

fn emit(json: impl FnOnce() -> String, text: impl FnOnce() -> String, f: Format) {
    match f {
        Format::Json => print!("{}", json()),
        Format::Text => print!("{}", text()),
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Validate { file, output } => {
            let p = load(&file)?;
            let r = report::validate(&p);
            emit(|| report::to_json(&r), || r.to_text(), output);
            Ok(r.ok)
        }
        Command::Deform(a) => {
            let p = load(&a.file)?;
            let r = report::deform(&p, options(&a))?;
            emit(|| report::to_json(&r), || r.to_text(), a.output);
            Ok(r.ok)
        }
        Command::Kuranishi(a) => {
            let p = load(&a.file)?;
            let r = report::kuranishi(&p, options(&a))?;
            emit(|| report::to_json(&r), || r.to_text(), a.output);
            Ok(r.ok)
        }
        Command::Examples { action } => match action {
            ExamplesAction::List => {
                for n in corpus::names() {
                    println!("{n}");
                }
                Ok(true)
            }
            ExamplesAction::Dump { name } => {
                print!("{}", corpus::source(&name)?);
                Ok(true)
            }
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
