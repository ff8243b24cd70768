use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ib_cli::output::resolve_threads;
use ib_cli::{
    cmd_bounds, cmd_concentration, cmd_params, cmd_run, cmd_validate, BoundsOptions, CliError,
    GapChoice, Outcome, RunOptions,
};

/// Imprecise-bandit experiments: simulations, certificates and bounds.
///
/// Exit codes: 0 success, 1 I/O error, 2 schema or usage error, 3 scenario
/// validation failure, 4 runtime policy error, 5 gap bound requested with a
/// nonpositive gap.
#[derive(Parser)]
#[command(name = "ib", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config: per-rep and summary regret CSVs plus a manifest.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads; falls back to IB_THREADS.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Certificate report (R, S, C, gap, bounds) for a scenario.
    Params {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Sine method name or JSON object.
        #[arg(long)]
        sine: Option<String>,
        /// Horizons at which bounds are evaluated.
        #[arg(long = "horizon", value_delimiter = ',')]
        horizons: Vec<usize>,
    },
    /// Structural and per-cell validation report for a scenario.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Bound curves over horizons.
    Bounds {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Comma-separated horizons.
        #[arg(long = "horizon", value_delimiter = ',', required = true)]
        horizons: Vec<usize>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        /// Add the gap bound; `auto` (the default) computes the gap.
        #[arg(long, num_args = 0..=1, default_missing_value = "auto")]
        gap: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        c_exp: f64,
        #[arg(long)]
        sine: Option<String>,
    },
    /// Empirical concentration rates against the bounds.
    Concentration {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn dispatch(cmd: Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Run {
            config,
            out,
            seed,
            threads,
        } => cmd_run(&RunOptions {
            config,
            out,
            seed,
            threads: resolve_threads(threads)?,
        }),
        Command::Concentration {
            config,
            out,
            seed,
            threads,
        } => cmd_concentration(&RunOptions {
            config,
            out,
            seed,
            threads: resolve_threads(threads)?,
        }),
        Command::Params {
            scenario,
            out,
            sine,
            horizons,
        } => cmd_params(&scenario, &out, sine.as_deref(), &horizons),
        Command::Validate { scenario, out } => cmd_validate(&scenario, &out),
        Command::Bounds {
            scenario,
            out,
            horizons,
            eta,
            delta,
            gap,
            c_exp,
            sine,
        } => {
            let gap = gap.as_deref().map(GapChoice::parse).transpose()?;
            cmd_bounds(
                &scenario,
                &out,
                &BoundsOptions {
                    horizons,
                    eta,
                    delta,
                    gap,
                    c_exp,
                    sine,
                },
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match dispatch(cli.command) {
        Ok(outcome) => {
            for p in &outcome.paths {
                println!("{}", p.display());
            }
            if let Some(e) = &outcome.failure {
                eprintln!("error: {e}");
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
