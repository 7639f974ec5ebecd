//! Backtest report emission: one CSV record per fold and horizon plus a
//! commented aggregate summary block, and the mean (± std) table printed
//! to standard output.

use super::backtest::{BacktestReport, HorizonSummary};
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

fn metric_cell(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:.6}")
    }
}

/// Serializes the report: a CSV table of per-fold records followed by
/// `#`-prefixed summary lines.
pub fn render_report(report: &BacktestReport) -> String {
    let mut out = String::new();
    out.push_str("model,fold,horizon,mase,rmsse,rmse,mae,train_s,predict_s,error\n");
    for r in &report.records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{:.3},{:.3},{}",
            r.model,
            r.fold,
            r.horizon,
            metric_cell(r.mase),
            metric_cell(r.rmsse),
            metric_cell(r.rmse),
            metric_cell(r.mae),
            r.train_seconds,
            r.predict_seconds,
            r.error.clone().unwrap_or_default().replace(',', ";"),
        );
    }
    out.push_str("#\n# summary (mean over folds, std in parentheses)\n");
    for s in &report.summaries {
        let _ = writeln!(
            out,
            "# model={} horizon={} folds={} mase={:.4} ({:.4}) rmsse={:.4} ({:.4}) rmse={:.4} ({:.4}) mae={:.4} ({:.4}) train_s={:.3} predict_s={:.3}",
            s.model,
            s.horizon,
            s.folds,
            s.mase.0,
            s.mase.1,
            s.rmsse.0,
            s.rmsse.1,
            s.rmse.0,
            s.rmse.1,
            s.mae.0,
            s.mae.1,
            s.train_seconds.0,
            s.predict_seconds.0,
        );
    }
    out
}

pub fn write_report(report: &BacktestReport, path: &Path) -> Result<()> {
    std::fs::write(path, render_report(report)).map_err(Error::Io)
}

/// Aggregate table for standard output: one row per model/horizon with
/// mean (± std) MASE.
pub fn format_summary_table(summaries: &[HorizonSummary]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24} {:>8} {:>20} {:>20} {:>10} {:>10}",
        "model", "horizon", "MASE", "RMSSE", "train_s", "predict_s"
    );
    for s in summaries {
        let _ = writeln!(
            out,
            "{:<24} {:>8} {:>9.3} (±{:.3}) {:>9.3} (±{:.3}) {:>10.3} {:>10.3}",
            s.model,
            s.horizon.to_string(),
            s.mase.0,
            s.mase.1,
            s.rmsse.0,
            s.rmsse.1,
            s.train_seconds.0,
            s.predict_seconds.0,
        );
    }
    out
}
