//! Shrinking-target families and hit-count processes.
//!
//! Targets are bands `A_n = {|sin phi| >= 1 - mu_n}` so that
//! `mu(A_n) = mu_n` exactly (`sin phi` is uniform under the SRB
//! measure), with `mu_n = min(mu_0, c (n+1)^{-gamma})`.

use crate::dynamics::PhasePoint;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TargetError {
    #[error("gamma = {0} outside the admissible range (0, 3/4)")]
    GammaRange(f64),
    #[error("scale c must be positive, got {0}")]
    BadScale(f64),
    #[error("mass cap mu0 = {0} outside (0, 1/2]")]
    BadCap(f64),
}

/// Nested family of phi-bands with exact SRB masses.
#[derive(Debug, Clone)]
pub struct ShrinkingTargetFamily {
    gamma: f64,
    c: f64,
    mu0: f64,
    n_max: usize,
    masses: Vec<f64>,
    cumulative: Vec<f64>,
}

impl ShrinkingTargetFamily {
    pub fn new(gamma: f64, c: f64, mu0: f64, n_max: usize) -> Result<Self, TargetError> {
        if !(gamma > 0.0 && gamma < 0.75) {
            return Err(TargetError::GammaRange(gamma));
        }
        if !(c > 0.0) {
            return Err(TargetError::BadScale(c));
        }
        if !(mu0 > 0.0 && mu0 <= 0.5) {
            return Err(TargetError::BadCap(mu0));
        }
        let masses: Vec<f64> =
            (0..n_max).map(|n| mu0.min(c * ((n + 1) as f64).powf(-gamma))).collect();
        let mut cumulative = Vec::with_capacity(n_max);
        let mut acc = 0.0;
        for &m in &masses {
            acc += m;
            cumulative.push(acc);
        }
        Ok(Self { gamma, c, mu0, n_max, masses, cumulative })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn scale(&self) -> f64 {
        self.c
    }

    pub fn cap(&self) -> f64 {
        self.mu0
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Exact SRB mass of `A_n`.
    pub fn mass(&self, n: usize) -> f64 {
        self.masses[n]
    }

    /// `E N_n = sum_{k<n} mu_k`.
    pub fn analytic_mean(&self, n: usize) -> f64 {
        self.cumulative[n - 1]
    }

    /// Whether `p` lies in the `n`-th target band.
    pub fn contains(&self, n: usize, p: &PhasePoint) -> bool {
        p.phi.sin().abs() >= 1.0 - self.masses[n]
    }

    /// `mu_n log(n+2)`, the margin of the `o(1/log n)` mass decay
    /// condition.
    pub fn log_decay_margin(&self, n: usize) -> f64 {
        self.masses[n] * ((n + 2) as f64).ln()
    }
}

/// Running hit counts `N_n = #{k < n : T^k x in A_k}` along one orbit.
#[derive(Debug, Clone)]
pub struct HitCountSeries {
    /// `counts[n-1]` is `N_n`, for `n = 1..=n_max`.
    pub counts: Vec<u32>,
    /// Matching analytic mean curve `sum_{k<n} mu_k`.
    pub analytic_mean: Vec<f64>,
}

/// Evaluate the hit-count process along precomputed orbit points
/// (`points[k]` standing for `T^k x`).
pub fn hit_count_series(points: &[PhasePoint], family: &ShrinkingTargetFamily) -> HitCountSeries {
    let n_max = family.n_max().min(points.len());
    let mut counts = Vec::with_capacity(n_max);
    let mut analytic_mean = Vec::with_capacity(n_max);
    let mut acc = 0u32;
    for (k, p) in points.iter().enumerate().take(n_max) {
        if family.contains(k, p) {
            acc += 1;
        }
        counts.push(acc);
        analytic_mean.push(family.analytic_mean(k + 1));
    }
    HitCountSeries { counts, analytic_mean }
}
