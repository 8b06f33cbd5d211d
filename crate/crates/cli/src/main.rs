use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pfilter::simulate::{DesignKind, Method};
use pfilter_cli::{
    cmd_oracle_check, cmd_run, cmd_simulate, OracleOptions, RunMethod, RunOptions, SimulateOptions,
};

#[derive(Parser)]
#[command(
    name = "pfilter",
    version,
    about = "Multi-layer FDR control with the p-filter"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a procedure on a p-value file and layer files
    Run {
        #[arg(long)]
        pvalues: PathBuf,
        /// Layer file; repeat for each layer, in order
        #[arg(long = "layer")]
        layers: Vec<PathBuf>,
        /// Target level; repeat once per layer, in order
        #[arg(long = "alpha")]
        alphas: Vec<f64>,
        #[arg(long, value_enum, default_value = "pfilter")]
        method: RunMethod,
        /// Output file (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the simulation designs and write a CSV table
    Simulate {
        #[arg(long)]
        design: DesignKind,
        /// Signal strength; repeat for several
        #[arg(long = "mu", required = true)]
        mus: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// One level for all layers, or one per layer (default 0.2)
        #[arg(long = "alpha")]
        alphas: Vec<f64>,
        /// pfilter, bh or bb; repeat for several (default: all)
        #[arg(long = "method")]
        methods: Vec<Method>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the fixed point with the exhaustive oracle on random instances
    OracleCheck {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, default_value_t = 3)]
        max_m: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            pvalues,
            layers,
            alphas,
            method,
            out,
        } => cmd_run(&RunOptions {
            pvalues,
            layers,
            alphas,
            method,
            out,
        }),
        Command::Simulate {
            design,
            mus,
            trials,
            seed,
            alphas,
            methods,
            out,
        } => cmd_simulate(&SimulateOptions {
            design,
            mus,
            trials,
            seed,
            alphas,
            methods,
            out,
        }),
        Command::OracleCheck {
            trials,
            seed,
            max_n,
            max_m,
        } => cmd_oracle_check(&OracleOptions {
            trials,
            seed,
            max_n,
            max_m,
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pfilter: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
