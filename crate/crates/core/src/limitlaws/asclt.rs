//! Almost-sure CLT and law-of-iterated-logarithm diagnostics along one
//! long orbit.

use crate::stats::{KsResult, WeightedHistogram};

/// Options for the log-weighted empirical law.
#[derive(Debug, Clone, Copy)]
pub struct AscltOptions {
    /// Histogram half-range for the atoms.
    pub zmax: f64,
    pub bins: usize,
    /// Normalize atoms to `S_k / sigma_k` (the nondegenerate reading).
    /// The raw-atom variant `delta_{S_k}` stays computable behind this
    /// switch for diagnostics.
    pub normalize_atoms: bool,
}

impl Default for AscltOptions {
    fn default() -> Self {
        Self { zmax: 8.0, bins: 4000, normalize_atoms: true }
    }
}

/// KS distance between the log-weighted occupation measure
/// `(1/W) sum_{k<=n} sigma_k^{-2} delta_{S_k/sigma_k}` (weights
/// `W = sum sigma_k^{-2}`, stationary model `sigma_k^2 = k sigma_f^2`)
/// and the standard normal.
pub fn asclt_ks(
    increments: impl IntoIterator<Item = f64>,
    sigma2_f: f64,
    opts: AscltOptions,
) -> KsResult {
    assert!(sigma2_f > 0.0);
    let mut hist = WeightedHistogram::new(opts.zmax, opts.bins);
    let mut sum = 0.0f64;
    let mut k = 0u64;
    for x in increments {
        k += 1;
        sum += x;
        let var_k = k as f64 * sigma2_f;
        let z = if opts.normalize_atoms { sum / var_k.sqrt() } else { sum };
        hist.add(z, 1.0 / var_k);
    }
    hist.ks_vs_std_normal()
}

/// Running LIL statistic `S_n / sqrt(2 sigma_n^2 log log sigma_n^2)`.
#[derive(Debug, Clone, Copy)]
pub struct LilResult {
    pub running_max: f64,
    pub argmax: u64,
    pub final_value: f64,
    pub n_start: u64,
}

/// Track the LIL ratio from `n_start` on (the iterated logarithm needs
/// `sigma_n^2 > e`); diagnostic only, the limsup converges too slowly
/// for a sharp gate.
pub fn lil_running_stat(
    increments: impl IntoIterator<Item = f64>,
    sigma2_f: f64,
    n_start: u64,
) -> LilResult {
    assert!(sigma2_f > 0.0);
    let mut sum = 0.0f64;
    let mut k = 0u64;
    let mut running_max = f64::NEG_INFINITY;
    let mut argmax = 0u64;
    let mut last = 0.0f64;
    for x in increments {
        k += 1;
        sum += x;
        if k < n_start {
            continue;
        }
        let var_n = k as f64 * sigma2_f;
        let denom = (2.0 * var_n * var_n.ln().ln()).sqrt();
        last = sum / denom;
        if last > running_max {
            running_max = last;
            argmax = k;
        }
    }
    LilResult { running_max, argmax, final_value: last, n_start }
}
