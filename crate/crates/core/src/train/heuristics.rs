//! Data-size heuristics for batch size, epoch count and the number of
//! learning-rate range-test iterations.

/// `B = min(T, max(16, min(256, 2^(2 + floor(log10 T)))))`.
pub fn batch_size_heuristic(series_len: usize) -> usize {
    let t = series_len.max(1);
    let b_star = 1usize << (2 + (t as f64).log10().floor() as u32);
    t.min(b_star.clamp(16, 256))
}

/// `N = min(500, max(50, floor(1000 * 2^(2.5 * log10 T) / T)))`.
pub fn epochs_heuristic(series_len: usize) -> usize {
    let t = series_len.max(1) as f64;
    let n_star = 1000.0 * (2.5 * t.log10()).exp2() / t;
    (n_star.floor() as usize).clamp(50, 500)
}

/// `round(100 + 50 * log10(10 + T))`, rounding half up.
pub fn lr_test_iterations(series_len: usize) -> usize {
    let t = series_len as f64;
    (100.0 + 50.0 * (10.0 + t).log10()).round() as usize
}
