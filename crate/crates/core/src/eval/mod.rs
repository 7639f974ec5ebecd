//! Scaled error metrics and the expanding-origin backtest.

pub mod backtest;
pub mod metrics;
pub mod report;

pub use backtest::{
    make_folds, rolling_origin_eval, run_backtest, BacktestModel, BacktestReport, FoldRecord,
    FoldSpec, Horizon, HorizonSummary, DEFAULT_FOLDS, DEFAULT_STEP_FRAC, DEFAULT_TEST_FRAC,
};
pub use metrics::{mae, mase, rmse, rmsse};
