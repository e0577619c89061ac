//! Best achievable recognition probabilities attached to each DFA construction.

/// `(52 + 4√7) / 81 ≈ 0.7726`, one cycle.
pub fn one_cycle() -> f64 {
    (52.0 + 4.0 * 7f64.sqrt()) / 81.0
}

/// Two cycles in a row. Known only numerically; this is the published
/// four-digit value.
pub const TWO_CYCLES_ROW: f64 = 0.6894;

/// `k / (2k − 1)`, k cycles in parallel.
pub fn parallel_cycles(k: usize) -> f64 {
    k as f64 / (2 * k - 1) as f64
}

/// `1/2 + 3√15 / 50 ≈ 0.7324`, incomparable pair.
pub fn incomparable_pair() -> f64 {
    0.5 + 3.0 * 15f64.sqrt() / 50.0
}
