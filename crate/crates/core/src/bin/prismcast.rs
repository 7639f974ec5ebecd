//! Command-line interface: fit, predict, backtest and synthetic dataset
//! generation.

use clap::{Args, Parser, Subcommand};
use prismcast::config_file::load_config;
use prismcast::data::{read_csv, write_forecast_csv, write_plot_data};
use prismcast::error::Error;
use prismcast::eval::report::{format_summary_table, write_report};
use prismcast::eval::{run_backtest, BacktestModel, Horizon, DEFAULT_FOLDS};
use prismcast::model::{fit, load_model, predict, save_model, ModelConfig};
use prismcast::synth::{write_scenario_csvs, ScenarioId, SynthScenario};
use prismcast::train::TrainConfig;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "prismcast",
    version,
    about = "Decomposable hybrid time-series forecasting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Configuration file (key-value tree).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed override for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Suppress progress output.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a model to a CSV dataset and serialize it.
    Fit(FitArgs),
    /// Predict with a fitted model over a CSV's timestamps.
    Predict(PredictArgs),
    /// Run the expanding-origin backtest.
    Backtest(BacktestArgs),
    /// Generate synthetic benchmark datasets.
    Synth(SynthArgs),
}

#[derive(Args)]
struct FitArgs {
    /// Input CSV with `ds` and `y` columns.
    #[arg(long)]
    data: PathBuf,
    /// Where to write the fitted model.
    #[arg(long)]
    model_out: PathBuf,
    /// Per-epoch metrics file (default: `<model_out>.metrics.csv`).
    #[arg(long)]
    metrics: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    /// Fitted model file.
    #[arg(long)]
    model: PathBuf,
    /// CSV providing the timestamps (and any regressor columns) to
    /// forecast over.
    #[arg(long)]
    data: PathBuf,
    /// Output forecast CSV.
    #[arg(long)]
    out: PathBuf,
    /// Include per-component contribution columns.
    #[arg(long)]
    decompose: bool,
    /// Also write a long-format `(ds, component, value)` file.
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

#[derive(Args)]
struct BacktestArgs {
    #[arg(long)]
    data: PathBuf,
    /// Comma-separated horizons, e.g. `1,3,15` or `inf`.
    #[arg(long, default_value = "1")]
    horizons: String,
    /// Where to write the per-fold report.
    #[arg(long)]
    report_out: PathBuf,
    /// Evaluate the naive reference model instead of a configured fit.
    #[arg(long)]
    naive: bool,
    /// Number of expanding-origin folds.
    #[arg(long, default_value_t = DEFAULT_FOLDS)]
    folds: usize,
}

#[derive(Args)]
struct SynthArgs {
    /// Scenario id: S-TS, S-EF, S-TSEF, S-mTSEF, S-AL, S-TSAL, S-TSEFAL.
    #[arg(long)]
    scenario: String,
    /// Output directory for the dataset CSVs and manifest.
    #[arg(long)]
    out_dir: PathBuf,
    /// Series length.
    #[arg(long, default_value_t = 6000)]
    length: usize,
    /// Number of independently generated series.
    #[arg(long, default_value_t = 5)]
    count: usize,
    /// Additive Gaussian noise level on the scaled aggregate.
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    e.status_code()
}

fn load_configs(cli: &Cli) -> prismcast::Result<(ModelConfig, TrainConfig)> {
    let (model, mut train) = match &cli.config {
        Some(path) => load_config(path)?,
        None => (ModelConfig::default(), TrainConfig::default()),
    };
    if let Some(seed) = cli.seed {
        train.seed = seed;
    }
    Ok((model, train))
}

fn run(cli: &Cli) -> prismcast::Result<()> {
    match &cli.command {
        Command::Fit(args) => {
            let frame = read_csv(&args.data)?;
            let (model_cfg, train_cfg) = load_configs(cli)?;
            let report = fit(&frame, &model_cfg, &train_cfg)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            save_model(&report.model, &args.model_out)?;
            let metrics_path = args.metrics.clone().unwrap_or_else(|| {
                let mut p = args.model_out.as_os_str().to_owned();
                p.push(".metrics.csv");
                PathBuf::from(p)
            });
            let mut text = String::from("epoch,loss,rmse,mae\n");
            for e in &report.epochs {
                text.push_str(&format!("{},{},{},{}\n", e.epoch, e.loss, e.rmse, e.mae));
            }
            std::fs::write(&metrics_path, text)?;
            if !cli.quiet {
                println!(
                    "fitted {} samples in {} epochs (batch {}, lr {:.6}); model -> {}",
                    report.sample_count,
                    report.n_epochs,
                    report.batch_size,
                    report.learning_rate,
                    args.model_out.display()
                );
            }
            Ok(())
        }
        Command::Predict(args) => {
            let model = load_model(&args.model)?;
            let frame = read_csv(&args.data)?;
            let forecast = predict(&model, &frame)?;
            write_forecast_csv(&forecast, args.decompose, &args.out)?;
            if let Some(plot) = &args.plot_data {
                write_plot_data(&forecast, plot)?;
            }
            if !cli.quiet {
                println!(
                    "wrote {} rows x {} forecast ages -> {}",
                    forecast.len(),
                    forecast.horizon(),
                    args.out.display()
                );
            }
            Ok(())
        }
        Command::Backtest(args) => {
            let frame = read_csv(&args.data)?;
            let (model_cfg, train_cfg) = load_configs(cli)?;
            let horizons = args
                .horizons
                .split(',')
                .map(Horizon::parse)
                .collect::<prismcast::Result<Vec<_>>>()?;
            let model = if args.naive {
                BacktestModel::Naive
            } else {
                BacktestModel::Configured {
                    name: "configured".into(),
                    config: model_cfg,
                    train: train_cfg,
                }
            };
            let report = run_backtest(
                &frame,
                &model,
                &horizons,
                args.folds,
                prismcast::eval::DEFAULT_TEST_FRAC,
                prismcast::eval::DEFAULT_STEP_FRAC,
            )?;
            write_report(&report, &args.report_out)?;
            let failed: Vec<&str> = report
                .records
                .iter()
                .filter_map(|r| r.error.as_deref())
                .collect();
            if !failed.is_empty() {
                eprintln!("warning: {} fold(s) failed; report marked", failed.len());
            }
            if !cli.quiet {
                print!("{}", format_summary_table(&report.summaries));
            }
            Ok(())
        }
        Command::Synth(args) => {
            let id = ScenarioId::parse(&args.scenario)?;
            let scenario = SynthScenario {
                length: args.length,
                count: args.count,
                noise_sigma: args.noise,
                ..SynthScenario::new(id, cli.seed.unwrap_or(0))
            };
            let paths = write_scenario_csvs(&scenario, &args.out_dir)?;
            if !cli.quiet {
                for p in &paths {
                    println!("{}", p.display());
                }
            }
            Ok(())
        }
    }
}
