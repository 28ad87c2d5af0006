use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use racs_shapley::error::Error;
use racs_shapley::layered::LayerVariant;
use racs_shapley::racs::Target;
use racs_shapley::report::compare::{compare, comparison_report};
use racs_shapley::report::compute::{compute_report, default_method, ComputeOptions, MethodChoice};
use racs_shapley::report::emit::{color_enabled, emit, Format, Report};
use racs_shapley::report::gamefile::parse_game_file;
use racs_shapley::report::risk::{
    risk_report, risk_report_output, risk_update, risk_update_output, UpdateMode,
};
use racs_shapley::report::verify::{run_verify, VerifyScope};

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY_FAILED: u8 = 4;

#[derive(Parser)]
#[command(
    name = "racs-shapley",
    version,
    about = "Shapley values for Bernoulli random-set games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Shapley values with one method.
    Compute {
        file: PathBuf,
        /// Defaults to racs for count-form files, exact-symmetric otherwise.
        #[arg(long)]
        method: Option<MethodChoice>,
        #[command(flatten)]
        opts: MethodArgs,
        #[arg(long, default_value = "table")]
        format: Format,
    },
    /// Compare methods against an exact column.
    Compare {
        file: PathBuf,
        /// Comma-separated or repeated.
        #[arg(long, value_delimiter = ',', default_values = ["racs", "racs-corrected", "layered"])]
        method: Vec<MethodChoice>,
        #[command(flatten)]
        opts: MethodArgs,
        #[arg(long, default_value = "table")]
        format: Format,
    },
    /// Rank devices by systemic risk from vulnerability counts.
    RiskReport(RiskArgs),
    /// Run the built-in cross-checks.
    Verify {
        #[arg(default_value = "all")]
        scope: VerifyScope,
        #[arg(long, default_value = "table")]
        format: Format,
    },
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct RiskArgs {
    #[command(subcommand)]
    action: Option<RiskAction>,
    file: Option<PathBuf>,
    #[arg(long, default_value = "table")]
    format: Format,
}

#[derive(Subcommand)]
enum RiskAction {
    /// Change one device's vulnerability count and re-rank.
    Update {
        file: PathBuf,
        #[arg(long)]
        device: String,
        #[arg(long)]
        vulns: u64,
        /// Keep the baseline total and shared factor.
        #[arg(long)]
        frozen_baseline: bool,
        #[arg(long, default_value = "table")]
        format: Format,
    },
}

#[derive(Args)]
struct MethodArgs {
    /// Monte Carlo permutations.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo samples per parallel chunk.
    #[arg(long)]
    chunk: Option<usize>,
    /// Round probabilities to a decimal grid with this tolerance.
    #[arg(long)]
    delta: Option<f64>,
    /// literal | unweighted.
    #[arg(long, default_value = "unweighted")]
    variant: LayerVariant,
    #[arg(long, value_enum, default_value_t = Normalize::None)]
    normalize: Normalize,
    #[arg(long, default_value_t = 0.2)]
    tau_low: f64,
    #[arg(long, default_value_t = 0.8)]
    tau_high: f64,
    /// Fall back to symmetric sums when enumeration is infeasible.
    #[arg(long)]
    force_symmetric: bool,
    /// Riemann nodes (default n).
    #[arg(long)]
    nodes: Option<usize>,
}

/// Rescaling target for layered output and the dense-regime correction.
#[derive(Clone, Copy, ValueEnum)]
enum Normalize {
    None,
    Te,
    One,
}

impl From<Normalize> for Option<Target> {
    fn from(n: Normalize) -> Self {
        match n {
            Normalize::None => None,
            Normalize::Te => Some(Target::Te),
            Normalize::One => Some(Target::One),
        }
    }
}

impl From<MethodArgs> for ComputeOptions {
    fn from(a: MethodArgs) -> Self {
        ComputeOptions {
            samples: a.samples,
            seed: a.seed,
            chunk: a.chunk,
            delta: a.delta,
            variant: a.variant,
            normalize: a.normalize.into(),
            tau_low: a.tau_low,
            tau_high: a.tau_high,
            force_symmetric: a.force_symmetric,
            nodes: a.nodes,
        }
    }
}

fn print(report: &Report, format: Format) -> Result<(), Error> {
    print!("{}", emit(report, format, color_enabled())?);
    if format != Format::Table {
        for w in &report.warnings {
            eprintln!("warning: {w}");
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Compute {
            file,
            method,
            opts,
            format,
        } => {
            let parsed = parse_game_file(file)?;
            let method = method.unwrap_or_else(|| default_method(&parsed));
            print(&compute_report(&parsed, method, &opts.into())?, format)?;
        }
        Command::Compare {
            file,
            method,
            opts,
            format,
        } => {
            let parsed = parse_game_file(file)?;
            let cmp = compare(&parsed, &method, &opts.into())?;
            print(&comparison_report(&parsed, &cmp), format)?;
        }
        Command::RiskReport(RiskArgs {
            action: Some(action),
            ..
        }) => {
            let RiskAction::Update {
                file,
                device,
                vulns,
                frozen_baseline,
                format,
            } = action;
            let parsed = parse_game_file(file)?;
            let mode = if frozen_baseline {
                UpdateMode::FrozenBaseline
            } else {
                UpdateMode::Recompute
            };
            let update = risk_update(&parsed, &device, vulns, mode)?;
            print(&risk_update_output(&parsed, &update)?, format)?;
        }
        Command::RiskReport(RiskArgs {
            action: None,
            file,
            format,
        }) => {
            let Some(file) = file else {
                eprintln!("error: risk-report needs a game file");
                return Ok(EXIT_USAGE);
            };
            let parsed = parse_game_file(file)?;
            let risk = risk_report(&parsed)?;
            print(&risk_report_output(&parsed, &risk)?, format)?;
        }
        Command::Verify { scope, format } => {
            let summary = run_verify(scope)?;
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&summary)?),
                _ => print!("{}", summary.to_text()),
            }
            if !summary.passed {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
