mod config;
mod data;
mod error;
mod estimate;
mod output;
mod study;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{CiSpec, DeltaCov, EstimateConfig, InfillConfig, ModelKind, SimulateConfig, WeightSpec};
use error::{CliError, CliResult};

/// Break-date estimation with boundary-weighted least squares, plus simulation studies.
#[derive(Debug, Parser)]
#[command(name = "breakpoint", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate the break date of a regression on CSV data.
    Estimate(EstimateArgs),
    /// Like `estimate`, with an interval for the break date (default residual:499).
    Ci(EstimateArgs),
    /// Monte Carlo study of the estimators in finite samples.
    Simulate(StudyArgs),
    /// Draws from the in-fill limit laws.
    Infill(StudyArgs),
}

#[derive(Debug, Args)]
struct EstimateArgs {
    /// TOML config, or a JSON report whose `config` is reused.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    response: Option<String>,
    /// Comma-separated; `const` is the intercept.
    #[arg(long, value_delimiter = ',')]
    break_cols: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    stable_cols: Option<Vec<String>>,
    /// Build `<response>_lag1..N` and drop the first N rows.
    #[arg(long)]
    lags: Option<usize>,
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    /// unit | ls | new | fisher | power:<gamma>
    #[arg(long)]
    weight: Option<WeightSpec>,
    #[arg(long)]
    trim: Option<f64>,
    /// none | analytic | residual:B | wild:B | recursive:B
    #[arg(long)]
    ci: Option<CiSpec>,
    #[arg(long)]
    level: Option<f64>,
    #[arg(long, value_enum)]
    delta_cov: Option<DeltaCov>,
    #[arg(long)]
    seed: Option<u64>,
    /// `.json` report, or `.csv` objective curves (report written alongside).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct StudyArgs {
    /// TOML config, or a JSON report whose `config` is reused.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Table path; the report goes to the same stem with `.json`.
    #[arg(long)]
    out: PathBuf,
}

impl EstimateArgs {
    fn resolve(&self, default_ci: CiSpec) -> CliResult<EstimateConfig> {
        let mut cfg = match &self.config {
            Some(p) => config::load::<EstimateConfig>(p)?,
            None => EstimateConfig { ci: default_ci, ..Default::default() },
        };
        macro_rules! set {
            ($($f:ident),*) => {$(if let Some(v) = &self.$f { cfg.$f = v.clone(); })*};
        }
        set!(response, break_cols, stable_cols, lags, model, weight, trim, ci, level, delta_cov, seed);
        if let Some(p) = &self.input {
            cfg.input = Some(p.clone());
        }
        Ok(cfg)
    }
}

fn init_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("BREAKPOINT_THREADS") {
        let n: usize = v.parse().map_err(|_| CliError::Config(format!("BREAKPOINT_THREADS='{v}' is not a number")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}

fn warn(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn run_estimate(command: &'static str, args: &EstimateArgs, default_ci: CiSpec) -> CliResult<()> {
    let cfg = args.resolve(default_ci)?;
    let report = estimate::run(command, &cfg)?;
    estimate::write(&report, &args.out)?;
    println!(
        "k_hat {} (rho {:.4}) with {}; LS k_hat {} (rho {:.4})",
        report.new.k_hat, report.new.rho_hat, report.new.weight, report.ls.k_hat, report.ls.rho_hat
    );
    if let Some(ci) = &report.ci {
        println!("{:.0}% interval for k: [{}, {}]", ci.level * 100.0, ci.lower_k, ci.upper_k);
    }
    Ok(())
}

fn load_study<C: serde::de::DeserializeOwned>(path: &Path) -> CliResult<C> {
    config::load(path)
}

fn run() -> CliResult<()> {
    let cli = Cli::parse();
    init_threads()?;
    match &cli.command {
        Command::Estimate(a) => run_estimate("estimate", a, CiSpec::None),
        Command::Ci(a) => run_estimate(
            "ci",
            a,
            CiSpec::Bootstrap { method: breakpoint_core::inference::BootstrapMethod::Residual, replications: 499 },
        ),
        Command::Simulate(a) => {
            let mut cfg: SimulateConfig = load_study(&a.config)?;
            cfg.reps = a.reps.unwrap_or(cfg.reps);
            cfg.seed = a.seed.unwrap_or(cfg.seed);
            let report = study::simulate(&cfg)?;
            warn(&report.warnings);
            study::write(&report, &a.out)
        }
        Command::Infill(a) => {
            let mut cfg: InfillConfig = load_study(&a.config)?;
            cfg.reps = a.reps.unwrap_or(cfg.reps);
            cfg.seed = a.seed.unwrap_or(cfg.seed);
            let report = study::infill(&cfg)?;
            warn(&report.warnings);
            study::write(&report, &a.out)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
