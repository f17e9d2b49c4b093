//! Command-line front end for the dressing library: configuration
//! validation, potential and Jost-solution grids, ray-asymptotics reports,
//! spectral data, residual verification suites, and a step-by-step chain
//! comparison.
//!
//! Exit codes: 0 on success, 2 for configuration or domain problems, 3 for
//! numerical failures and verification exceedances. Outputs are byte-stable
//! for identical configurations.

mod commands;
mod config_file;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config_file::{OutputFormat, RunConfig};
use darboux::Error;
use output::Sink;

#[derive(Debug, Parser)]
#[command(
    name = "darboux",
    version,
    about = "Multi-soliton potentials of the two-dimensional nonstationary Schrodinger operator: \
             grid evaluation, scattering reports, and verification suites"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Args)]
struct Common {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output path; overrides the config's output.path (stdout when neither
    /// is set).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Grid output format; overrides the config's output.format.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Worker thread count for grid evaluation (defaults to all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Check a run configuration and report every violated invariant.
    Validate(Common),
    /// Evaluate the dressed potential on the configured grid.
    Potential(Common),
    /// Evaluate the dressed Jost solution on the grid at each spectral sample.
    Jost(Common),
    /// Report per-soliton ray profiles for both time signs, with a fit cross-check.
    Rays(Common),
    /// Report transmission values and the discrete spectral constants.
    Spectral(Common),
    /// Run a verification suite and report its residuals.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Suite to run: pde, wronskian, oracle, or all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Compare the step-by-step dressing chain against the closed-form engine.
    OracleCompare(Common),
}

impl Verb {
    fn common(&self) -> &Common {
        match self {
            Verb::Validate(c)
            | Verb::Potential(c)
            | Verb::Jost(c)
            | Verb::Rays(c)
            | Verb::Spectral(c)
            | Verb::OracleCompare(c) => c,
            Verb::Verify { common, .. } => common,
        }
    }

    fn emits_grid(&self) -> bool {
        matches!(self, Verb::Potential(_) | Verb::Jost(_))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> darboux::Result<i32> {
    let common = cli.verb.common();
    if let Some(n) = common.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| {
            Error::InvalidConfig(format!("cannot configure the thread pool: {e}"))
        })?;
    }
    if !cli.verb.emits_grid() && common.format == Some(OutputFormat::Csv) {
        return Err(Error::InvalidConfig(
            "csv format is only available for the grid verbs (potential, jost); \
             the report verbs always emit JSON"
                .into(),
        ));
    }
    let run_config = RunConfig::load(&common.config)?;
    let sink = Sink::new(common.out.clone().or_else(|| run_config.output.path.clone()));
    let grid_format = common.format.or(run_config.output.format).unwrap_or(OutputFormat::Csv);
    match &cli.verb {
        Verb::Validate(_) => commands::validate(&run_config, &sink),
        Verb::Potential(_) => commands::potential(&run_config, grid_format, &sink),
        Verb::Jost(_) => commands::jost(&run_config, grid_format, &sink),
        Verb::Rays(_) => commands::rays(&run_config, &sink),
        Verb::Spectral(_) => commands::spectral_report(&run_config, &sink),
        Verb::Verify { suite, .. } => commands::verify_suites(&run_config, suite, &sink),
        Verb::OracleCompare(_) => commands::oracle_compare(&run_config, &sink),
    }
}
