//! Block schedules, the epsilon feasibility budget and the
//! conditional-approximation decay diagnostic.

use crate::dynamics::{BilliardTable, PhasePoint};
use crate::measure::{conditional_expectation_on_cells, cylinder_partition, SrbMeasure};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HypothesisError {
    #[error("lambda = {lambda} outside (max(1/4, 1/(8 kappa2)), 1/2) = ({lo}, 0.5)")]
    LambdaRange { lambda: f64, lo: f64 },
    #[error("need kappa_p >= kappa2 > 1/4, got kappa2 = {kappa2}, kappa_p = {kappa_p}")]
    KappaRange { kappa2: f64, kappa_p: f64 },
}

/// `ceil(i^eps)` with a round-to-nearest guard against cases like
/// `27^(1/3) = 3 + 1 ulp`.
pub fn ceil_pow(i: u64, eps: f64) -> u64 {
    let v = (i as f64).powf(eps);
    let r = v.round();
    if (v - r).abs() < 1e-9 {
        r as u64
    } else {
        v.ceil() as u64
    }
}

/// Consecutive time blocks `Delta_j = [tau_j, tau_{j+1})` with
/// `tau_j = sum_{i<j} ceil(i^eps)` and the `tau_0 = -1` convention.
#[derive(Debug, Clone)]
pub struct BlockSchedule {
    pub eps: f64,
    /// `tau[j]` for `j = 0..=j_max+1`; `tau[0] = -1`.
    pub tau: Vec<i64>,
}

impl BlockSchedule {
    /// Half-open block `[tau_j, tau_{j+1})` for `j >= 1`.
    pub fn block(&self, j: usize) -> (i64, i64) {
        (self.tau[j], self.tau[j + 1])
    }

    pub fn block_len(&self, j: usize) -> u64 {
        ceil_pow(j as u64, self.eps)
    }

    pub fn j_max(&self) -> usize {
        self.tau.len() - 2
    }
}

/// Exact integer block schedule for `eps` in `(0, 1]`.
pub fn block_schedule(eps: f64, j_max: usize) -> BlockSchedule {
    assert!(eps > 0.0 && eps <= 1.0, "eps must lie in (0, 1]");
    let mut tau = Vec::with_capacity(j_max + 2);
    tau.push(-1i64);
    let mut acc = 0i64;
    // tau_1 = ceil(0^eps) = 0
    for j in 1..=j_max + 1 {
        acc += ceil_pow(j as u64 - 1, eps) as i64;
        tau.push(acc);
    }
    BlockSchedule { eps, tau }
}

/// Feasible epsilon for the block machinery given the moment exponents
/// and the error exponent.
#[derive(Debug, Clone, Copy)]
pub struct EpsilonBudget {
    pub kappa2: f64,
    pub kappa_p: f64,
    pub lambda: f64,
    /// Largest feasible epsilon shrunk by the 0.99 safety factor, `None`
    /// when no positive epsilon satisfies both constraints.
    pub epsilon: Option<f64>,
}

impl EpsilonBudget {
    /// Both feasibility constraints, strictly, at a given epsilon.
    pub fn feasible_at(&self, eps: f64) -> bool {
        constraints_hold(self.kappa2, self.kappa_p, self.lambda, eps)
    }
}

fn constraints_hold(kappa2: f64, kappa_p: f64, lambda: f64, eps: f64) -> bool {
    eps > 0.0
        && 2.0 * eps * kappa_p + 1.0 / (4.0 - eps) < 2.0 * kappa2 * lambda
        && eps * kappa_p / kappa2 < 4.0 * lambda - 1.0
}

/// Bisect for the supremum feasible epsilon of the two block
/// constraints, shrunk by a 0.99 safety factor.
pub fn epsilon_budget(
    kappa2: f64,
    kappa_p: f64,
    lambda: f64,
) -> Result<EpsilonBudget, HypothesisError> {
    if !(kappa2 > 0.25 && kappa_p >= kappa2) {
        return Err(HypothesisError::KappaRange { kappa2, kappa_p });
    }
    let lo_bound = (0.25f64).max(1.0 / (8.0 * kappa2));
    if !(lambda > lo_bound && lambda < 0.5) {
        return Err(HypothesisError::LambdaRange { lambda, lo: lo_bound });
    }
    if !constraints_hold(kappa2, kappa_p, lambda, 1e-12) {
        return Ok(EpsilonBudget { kappa2, kappa_p, lambda, epsilon: None });
    }
    let (mut lo, mut hi) = (1e-12f64, 1.0f64);
    if constraints_hold(kappa2, kappa_p, lambda, hi) {
        lo = hi;
    } else {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if constraints_hold(kappa2, kappa_p, lambda, mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let eps = 0.99 * lo;
    let epsilon = constraints_hold(kappa2, kappa_p, lambda, eps).then_some(eps);
    Ok(EpsilonBudget { kappa2, kappa_p, lambda, epsilon })
}

/// Decay table of the block conditional-expectation approximation: for
/// sampled block indices `j`, the sup over sampled points of
/// `|f - E(f | F at depth ceil(0.2 j^eps))|`, taken over confident
/// rebounce-free cells (the contracting part of the partition).
#[derive(Debug, Clone)]
pub struct BlockDecay {
    pub js: Vec<usize>,
    pub depths: Vec<usize>,
    pub sup_gaps: Vec<f64>,
    /// Slope of `log sup` against `j^eps`; the lemma predicts a negative
    /// value.
    pub slope: f64,
    pub slope_se: f64,
}

pub fn block_approximation_diagnostic(
    table: &BilliardTable,
    measure: &SrbMeasure,
    f: impl Fn(&PhasePoint) -> f64 + Copy,
    eps: f64,
    js: &[usize],
    samples_per_depth: usize,
    rng: &mut impl Rng,
) -> BlockDecay {
    let mut depths = Vec::with_capacity(js.len());
    let mut sup_gaps = Vec::with_capacity(js.len());
    let mut cache: Vec<(usize, f64)> = Vec::new();
    for &j in js {
        let depth = ceil_pow(j as u64, eps).div_ceil(5).max(1) as usize;
        let sup = match cache.iter().find(|(d, _)| *d == depth) {
            Some(&(_, s)) => s,
            None => {
                let mut part = cylinder_partition(table, measure, depth, samples_per_depth, rng);
                // deeper partitions fragment; scale the confidence floor
                // down so the sup keeps a population to range over
                part.min_occupancy = 25;
                let g = conditional_expectation_on_cells(f, &part);
                cache.push((depth, g.sup_gap_hyperbolic));
                g.sup_gap_hyperbolic
            }
        };
        depths.push(depth);
        sup_gaps.push(sup);
    }
    let xs: Vec<f64> = js.iter().map(|&j| (j as f64).powf(eps)).collect();
    let ys: Vec<f64> = sup_gaps.iter().map(|&s| s.max(f64::MIN_POSITIVE).ln()).collect();
    let (slope, _, slope_se) = crate::stats::ols(&xs, &ys);
    BlockDecay { js: js.to_vec(), depths, sup_gaps, slope, slope_se }
}
