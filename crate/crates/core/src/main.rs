use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use contact_lab::config::Config;
use contact_lab::experiments::{self, RunReport};
use contact_lab::Error;

#[derive(Parser)]
#[command(
    name = "contact-lab",
    version,
    about = "Contact-wave profile and half-line Navier-Stokes lab"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the contact-wave ansatz and fit its decay rates.
    Profile(Common),
    /// Evaluate the half-line heat kernel and its gap to the ansatz.
    Kernel(Common),
    /// Run the Navier-Stokes solver from the (perturbed) ansatz.
    Simulate(Common),
    /// Run the acceptance criteria.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Print the criterion identifiers and exit.
        #[arg(long)]
        list: bool,
        /// Run only these criteria (repeatable).
        #[arg(long, value_name = "ID")]
        only: Vec<String>,
        #[arg(long, hide = true)]
        fault_a_scale: Option<f64>,
    },
}

#[derive(Args)]
struct Common {
    /// TOML configuration; the standard configuration when omitted.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Override the number of grid cells.
    #[arg(long, value_name = "INT")]
    grid_n: Option<usize>,
    /// Override the final time.
    #[arg(long, value_name = "FLOAT")]
    t_end: Option<f64>,
    /// Override delta0 as 1/(2k+1).
    #[arg(long, value_name = "INT")]
    delta0_k: Option<u32>,
}

impl Common {
    fn config(&self) -> Result<Config, Error> {
        let base = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config::standard(),
        };
        base.with_overrides(self.grid_n, self.t_end, self.delta0_k)
    }
}

fn exit_for(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_numerical() { 3 } else { 2 })
}

fn finish(result: Result<RunReport, Error>) -> ExitCode {
    match result {
        Ok(report) => {
            for line in &report.summary {
                println!("{line}");
            }
            for f in &report.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => exit_for(&e),
    }
}

type Runner = fn(&Config, &std::path::Path) -> Result<RunReport, Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, run): (&Common, Runner) = match &cli.command {
        Command::Profile(c) => (c, experiments::run_profile),
        Command::Kernel(c) => (c, experiments::run_kernel),
        Command::Simulate(c) => (c, experiments::run_simulate),
        Command::Verify {
            common,
            list,
            only,
            fault_a_scale,
        } => {
            if *list {
                print!("{}", experiments::criteria_listing());
                return ExitCode::SUCCESS;
            }
            let cfg = match common.config() {
                Ok(c) => c,
                Err(e) => return exit_for(&e),
            };
            return match experiments::run_verify(&cfg, &common.out, only, *fault_a_scale) {
                Ok(r) if r.passed => ExitCode::SUCCESS,
                Ok(r) => {
                    eprintln!("failed criteria: {}", r.failed.join(", "));
                    ExitCode::from(1)
                }
                Err(e) => exit_for(&e),
            };
        }
    };
    match common.config() {
        Ok(cfg) => finish(run(&cfg, &common.out)),
        Err(e) => exit_for(&e),
    }
}
