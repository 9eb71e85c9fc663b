use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use irlab_cli::{run, Command, Invocation};

#[derive(Parser)]
#[command(name = "irlab", version, about = "Infrared laboratory: cached numerical experiments")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Photon number of the fiber ground state against the infrared cutoff
    Irscan(RunArgs),
    /// Ground-state energies and group velocities over a momentum list
    Dispersion(RunArgs),
    /// Cauchy residuals of the CFP and BDG approximating vectors
    Cfp(RunArgs),
    /// Møller residuals with and without the Dollard modifier
    Dollard(RunArgs),
    /// Exclusive and inclusive cross sections against the infrared cutoff
    Yfs(RunArgs),
    /// Coulomb phase and Weyl vacuum overlap against the switching scale
    Phase(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides [output] directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads, 0 for one per core; never changes the output bytes
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for the eigensolver start vectors; overrides the config
    #[arg(long)]
    seed: Option<u64>,
    /// Also write SVG plots
    #[arg(long)]
    svg: bool,
    /// Recompute even when a cached result exists
    #[arg(long)]
    force: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Irscan(a) => (Command::Irscan, a),
        Cmd::Dispersion(a) => (Command::Dispersion, a),
        Cmd::Cfp(a) => (Command::Cfp, a),
        Cmd::Dollard(a) => (Command::Dollard, a),
        Cmd::Yfs(a) => (Command::Yfs, a),
        Cmd::Phase(a) => (Command::Phase, a),
    };
    let outcome = run(&Invocation {
        command,
        config: args.config,
        out: args.out,
        threads: args.threads,
        seed: args.seed,
        svg: args.svg,
        force: args.force,
    });
    if outcome.exit_code == 0 {
        println!("{}", outcome.message);
    } else {
        eprintln!("{}", outcome.message);
    }
    ExitCode::from(outcome.exit_code as u8)
}
