//! `bqs`: run the protocols, launch attack evaluations, verify the bounds.
//!
//! Machine-readable reports go to stdout (or `--out`); human progress notes
//! go to stderr. Exit codes: 0 success, 1 verification failure, 2 usage or
//! configuration error.

mod commands;
mod config;
mod reports;
mod suites;

use clap::{Parser, Subcommand};

use config::{AttackArgs, CommitArgs, FlipArgs, OtWrapArgs, RotArgs, VerifyArgs};

#[derive(Parser)]
#[command(
    name = "bqs",
    version,
    about = "Two-party cryptography over a stalled quantum channel: protocol runner and verification suite"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run commitment sessions and report the acceptance rate.
    Commit(CommitArgs),
    /// Run random-transfer sessions and report the branch match rate.
    Rot(RotArgs),
    /// Run coin-flipping sessions and report agreement and bias.
    Flip(FlipArgs),
    /// Run the chosen-input transfer wrapper over the random transfer.
    OtWrap(OtWrapArgs),
    /// Evaluate a malicious-receiver attack exactly or by sampling.
    Attack(AttackArgs),
    /// Run a verification suite; exit 0 only if every check holds.
    Verify(VerifyArgs),
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Commit(args) => commands::commit::run(args),
        Command::Rot(args) => commands::rot::run(args),
        Command::Flip(args) => commands::flip::run(args),
        Command::OtWrap(args) => commands::otwrap::run(args),
        Command::Attack(args) => commands::attack::run(args),
        Command::Verify(args) => commands::verify::run(args),
    }
}
