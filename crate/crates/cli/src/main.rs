//! Workbench CLI: verify code claims, run reduction pipelines, build PIR
//! schemes, replay certificates, and sweep parameter grids.

mod commands;
mod common;

use clap::{Parser, Subcommand};
use common::EXIT_USAGE;

#[derive(Parser)]
#[command(
    name = "qldc",
    about = "Exact workbench for locally decodable classical and quantum codes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a claimed parameter tuple against a code spec by exhaustive
    /// evaluation.
    Verify(commands::verify::VerifyArgs),
    /// Run the quantum→classical reduction pipeline and emit a certificate.
    Reduce(commands::reduce::ReduceArgs),
    /// Build a PIR scheme from a smooth code, audit privacy, simulate
    /// retrievals, and optionally solve the minimax decoder game.
    Pir(commands::pir::PirArgs),
    /// Pretty-print a reduction certificate, optionally replaying its biases
    /// against the input spec.
    Report(commands::report::ReportArgs),
    /// Emit CSV tables over parameter grids.
    Sweep(commands::sweep::SweepArgs),
}

fn main() {
    let cli = Cli::parse();
    let exit = match cli.command {
        Command::Verify(args) => commands::verify::run(args),
        Command::Reduce(args) => commands::reduce::run(args),
        Command::Pir(args) => commands::pir::run(args),
        Command::Report(args) => commands::report::run(args),
        Command::Sweep(args) => commands::sweep::run(args),
    };
    match exit {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(EXIT_USAGE);
        }
    }
}
