//! Shrinking-target statistics: mean and variance curves of the
//! hit-count process, its normalized distribution and the dynamical
//! Borel-Cantelli check.

use crate::limitlaws::{EnsembleError, SeriesEnsemble};
use crate::observables::ShrinkingTargetFamily;
use crate::stats::{self, KsResult};

/// Report of the hit-count ensemble against its analytic anchors.
#[derive(Debug, Clone)]
pub struct TargetReport {
    pub grid: Vec<usize>,
    /// Ensemble mean of `N_n` per grid point, with standard errors.
    pub mean_emp: Vec<f64>,
    pub mean_se: Vec<f64>,
    /// `E N_n = sum_{k<n} mu_k` per grid point.
    pub mean_analytic: Vec<f64>,
    pub variance: Vec<f64>,
    /// Log-log slope of the variance curve (expected near `1 - gamma`).
    pub var_slope: f64,
    pub var_slope_se: f64,
    /// KS of `(N_n - E N_n) / sigma_n` against N(0,1) at `ks_n`.
    pub ks: KsResult,
    /// Same comparison with the half-integer continuity correction for
    /// the lattice variable `N_n`; isolates the distributional shape
    /// from the unavoidable atom-size floor `1/(2 sqrt(2 pi sigma^2))`.
    pub ks_continuity_corrected: f64,
    pub ks_n: usize,
    /// Smallest final hit count across the ensemble.
    pub min_final_count: f64,
    /// Dynamical Borel-Cantelli: every orbit has hit at least once.
    pub borel_cantelli: bool,
    pub ensemble_size: usize,
}

/// Build the report from an ensemble of UNCENTERED target-indicator
/// series (so `S_n = N_n`).
pub fn shrinking_target_report(
    ens: &SeriesEnsemble,
    family: &ShrinkingTargetFamily,
    grid: &[usize],
    ks_n: usize,
) -> Result<TargetReport, EnsembleError> {
    let mut mean_emp = Vec::with_capacity(grid.len());
    let mut mean_se = Vec::with_capacity(grid.len());
    let mut mean_analytic = Vec::with_capacity(grid.len());
    let mut variance = Vec::with_capacity(grid.len());
    for &n in grid {
        let counts = ens.partial_sums_at(n)?;
        let (m, se) = stats::mean_and_se(&counts);
        mean_emp.push(m);
        mean_se.push(se);
        mean_analytic.push(family.analytic_mean(n));
        variance.push(stats::variance(&counts));
    }
    // variance slope over the asymptotic part of the grid
    let fit: Vec<(f64, f64)> = grid
        .iter()
        .zip(&variance)
        .filter(|(&n, &v)| n >= 10 && v > 0.0)
        .map(|(&n, &v)| ((n as f64).ln(), v.ln()))
        .collect();
    let xs: Vec<f64> = fit.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = fit.iter().map(|p| p.1).collect();
    let (var_slope, _, var_slope_se) = stats::ols(&xs, &ys);

    let counts = ens.partial_sums_at(ks_n)?;
    let sd = stats::variance(&counts).sqrt();
    if !(sd > 0.0) {
        return Err(EnsembleError::DegenerateVariance(ks_n));
    }
    let analytic = family.analytic_mean(ks_n);
    let mut zs: Vec<f64> = counts.iter().map(|c| (c - analytic) / sd).collect();
    let d = stats::ks_statistic(&mut zs, stats::std_normal_cdf);
    let ks = KsResult { statistic: d, sample_size: zs.len(), law: "N(0,1)" };
    let max_count = counts.iter().copied().fold(0.0f64, f64::max) as usize;
    let e = counts.len() as f64;
    let mut ks_continuity_corrected = 0.0f64;
    for k in 0..=max_count {
        let cdf_emp = counts.iter().filter(|&&c| c <= k as f64 + 0.01).count() as f64 / e;
        let z = (k as f64 + 0.5 - analytic) / sd;
        ks_continuity_corrected =
            ks_continuity_corrected.max((cdf_emp - stats::std_normal_cdf(z)).abs());
    }

    let finals = ens.partial_sums_at(ens.n_max)?;
    let min_final_count = finals.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(TargetReport {
        grid: grid.to_vec(),
        mean_emp,
        mean_se,
        mean_analytic,
        variance,
        var_slope,
        var_slope_se,
        ks,
        ks_continuity_corrected,
        ks_n,
        min_final_count,
        borel_cantelli: min_final_count >= 1.0,
        ensemble_size: ens.size(),
    })
}
