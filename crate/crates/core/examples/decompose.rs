//! Fit the bundled airline-passengers sample and print the decomposed
//! forecast for the last few months.
//!
//! Run with: `cargo run --example decompose`

use prismcast::data::{format_timestamp, read_csv};
use prismcast::model::{fit, predict, ModelConfig};
use prismcast::train::TrainConfig;

fn main() -> prismcast::Result<()> {
    let frame = read_csv("data/air_passengers.csv".as_ref())?;
    let train = TrainConfig {
        seed: 1,
        ..TrainConfig::default()
    };
    let report = fit(&frame, &ModelConfig::default(), &train)?;
    println!(
        "fitted {} samples in {} epochs (batch {}, learning rate {:.5})",
        report.sample_count, report.n_epochs, report.batch_size, report.learning_rate
    );

    let forecast = predict(&report.model, &frame)?;
    let trend = forecast.component("trend").expect("trend column");
    let yearly = forecast.component("season_yearly").expect("yearly column");
    println!(
        "{:>22} {:>8} {:>9} {:>9} {:>9}",
        "month", "actual", "yhat1", "trend", "yearly"
    );
    for row in forecast.len() - 6..forecast.len() {
        println!(
            "{:>22} {:>8.0} {:>9.1} {:>9.1} {:>9.1}",
            format_timestamp(forecast.timestamps[row]),
            forecast.actual[row].unwrap_or(f64::NAN),
            forecast.yhat[0][row].unwrap_or(f64::NAN),
            trend[row].unwrap_or(f64::NAN),
            yearly[row].unwrap_or(f64::NAN),
        );
    }
    Ok(())
}
