use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lcrm::cli;
use lcrm::io::IngestOptions;

#[derive(Parser)]
#[command(name = "lcrm", version, about = "Zero-inflated longitudinal circular regression: simulate, fit, replicate, compare, predict, validate")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Named preset (table1..table7, table7b).
    #[arg(long)]
    preset: Option<String>,
    /// Override the number of subjects.
    #[arg(long)]
    n: Option<usize>,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct IngestArgs {
    /// Interpret angle columns as degrees.
    #[arg(long)]
    degrees: bool,
    /// Fold axial data by multiplying angles by 4 before wrapping.
    #[arg(long = "axis-times-4")]
    axis_times_4: bool,
}

impl IngestArgs {
    fn options(&self) -> IngestOptions {
        IngestOptions { degrees: self.degrees, axis_times_4: self.axis_times_4 }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset from a scenario or preset.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Fit the model to a dataset CSV.
    Fit {
        /// Dataset CSV.
        #[arg(long)]
        data: PathBuf,
        /// Fit configuration JSON; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Override the config variant (model1, model2, model3).
        #[arg(long)]
        variant: Option<String>,
        /// Enable the random-zero generalization (adds eta columns).
        #[arg(long)]
        random_zeros: bool,
        #[command(flatten)]
        ingest: IngestArgs,
    },
    /// Run a replication study and aggregate Mean/SE/RB/CP.
    Replicate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Full-scale settings: 500 replications, 100k-iteration chains.
        #[arg(long)]
        paper_scale: bool,
        /// Worker threads for replicates.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Fit Model-I/II/III on identical datasets and emit a timing table.
    Compare {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        paper_scale: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Evaluate posterior predictive density curves from a saved fit.
    Predict {
        /// Directory holding posterior.csv + posterior.json.
        #[arg(long)]
        posterior: PathBuf,
        /// JSON list of predictive specs ({"x": [...], "theta_x": r}).
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a dataset against the schema and censoring contract.
    Validate {
        #[arg(long)]
        data: PathBuf,
        /// Censoring half-width for the response.
        #[arg(long, default_value_t = 0.035)]
        delta_y: f64,
        /// Censoring half-width for the circular covariate.
        #[arg(long, default_value_t = 0.035)]
        delta_x: f64,
        #[command(flatten)]
        ingest: IngestArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate { scenario } => cli::cmd_simulate(
            scenario.scenario.as_deref(),
            scenario.preset.as_deref(),
            scenario.n,
            scenario.seed,
            &scenario.out,
        ),
        Command::Fit { data, config, out, variant, random_zeros, ingest } => {
            cli::cmd_fit_with_overrides(
                data,
                config.as_deref(),
                out,
                &ingest.options(),
                variant.as_deref(),
                *random_zeros,
            )
        }
        Command::Replicate { scenario, paper_scale, jobs } => cli::cmd_replicate(
            scenario.scenario.as_deref(),
            scenario.preset.as_deref(),
            scenario.n,
            scenario.seed,
            &scenario.out,
            *paper_scale,
            *jobs,
        ),
        Command::Compare { scenario, paper_scale, jobs } => cli::cmd_compare(
            scenario.scenario.as_deref(),
            scenario.preset.as_deref(),
            scenario.n,
            scenario.seed,
            &scenario.out,
            *paper_scale,
            *jobs,
        ),
        Command::Predict { posterior, spec, out } => cli::cmd_predict(posterior, spec, out),
        Command::Validate { data, delta_y, delta_x, ingest } => {
            cli::cmd_validate(data, *delta_y, *delta_x, &ingest.options())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
