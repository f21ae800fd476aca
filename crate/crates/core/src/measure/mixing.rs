//! Empirical alpha-mixing coefficients on cylinder partitions.
//!
//! Joint cylinder frequencies come from one long orbit (Birkhoff
//! averaging) rather than independent draws: past cell at time `t`,
//! future cell at time `t + gap`, both read off the same scatterer-id
//! sequence. Cells below the occupancy floor are excluded from the
//! maximum so the estimator is not driven by frequency noise.

use crate::dynamics::BilliardTable;
use crate::measure::SrbMeasure;
use rand::Rng;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MixingError {
    #[error("only {0} cylinder cells reach the occupancy floor; need at least 2")]
    InsufficientSamples(usize),
    #[error("orbit generation kept truncating; collected {0} of {1} requested points")]
    OrbitBudget(usize, usize),
}

/// Empirical alpha-mixing coefficient at one `(depth, gap)` pair.
#[derive(Debug, Clone)]
pub struct MixingEstimate {
    pub gap: usize,
    pub depth: usize,
    /// `max |mu(A and B) - mu(A) mu(B)|` over qualified cell pairs.
    pub alpha: f64,
    pub sample_size: usize,
    /// Binomial standard error of the maximizing joint frequency.
    pub stderr: f64,
    /// All qualified pair covariances, for the covariance-bound check.
    pub pair_covariances: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct MixingOptions {
    pub burn_in: usize,
    pub min_occupancy: usize,
}

impl Default for MixingOptions {
    fn default() -> Self {
        Self { burn_in: 1_000, min_occupancy: 50 }
    }
}

/// Alpha-mixing estimates for several gaps from one shared orbit.
///
/// The scatterer-id sequence is generated once; each gap pairs the
/// centered word at time `t` with the one at `t + gap`.
pub fn alpha_mixing_profile(
    table: &BilliardTable,
    measure: &SrbMeasure,
    depth: usize,
    gaps: &[usize],
    n_samples: usize,
    rng: &mut impl Rng,
    opts: MixingOptions,
) -> Result<Vec<MixingEstimate>, MixingError> {
    let max_gap = gaps.iter().copied().max().unwrap_or(0);
    let total = opts.burn_in + n_samples + max_gap + 2 * depth + 2;

    // one long orbit; grazing truncations restart from fresh SRB samples
    // (the seam is a measure-zero event at this guard)
    let n_ids = table.scatterers().len();
    let mut ids: Vec<u16> = Vec::with_capacity(total + 1);
    let mut offs: Vec<[i8; 2]> = Vec::with_capacity(total + 1);
    let mut restarts = 0;
    while ids.len() < total {
        let start = measure.sample(rng);
        let orbit = table.orbit(&start, total - ids.len());
        ids.extend(orbit.itinerary.iter().map(|&s| s as u16));
        offs.extend_from_slice(&orbit.offsets);
        // seam sentinel keeps offs[j] aligned with the flight out of
        // ids[j]
        offs.push([0, 0]);
        restarts += 1;
        if restarts > 1_000 {
            return Err(MixingError::OrbitBudget(ids.len(), total));
        }
    }

    // centered branch word at orbit time t, matching `centered_word`
    let word_at = |t: usize| -> Vec<u16> {
        let mut w = Vec::with_capacity(2 * depth + 1);
        for k in (1..=depth).rev() {
            let j = t - k;
            w.push(super::itinerary::encode_symbol(
                n_ids,
                ids[j] as usize,
                [-offs[j][0], -offs[j][1]],
            ));
        }
        w.push(super::itinerary::encode_symbol(n_ids, ids[t] as usize, [0, 0]));
        for k in 1..=depth {
            w.push(super::itinerary::encode_symbol(
                n_ids,
                ids[t + k] as usize,
                offs[t + k - 1],
            ));
        }
        w
    };

    // label each time point by its word's cell index
    let n_t = n_samples;
    let base = opts.burn_in + depth;
    let mut word_index: HashMap<Vec<u16>, u32> = HashMap::new();
    let mut labels = Vec::with_capacity(n_t + max_gap);
    for t_rel in 0..n_t + max_gap {
        let w = word_at(base + t_rel);
        let next = word_index.len() as u32;
        let idx = *word_index.entry(w).or_insert(next);
        labels.push(idx);
    }
    let n_cells = word_index.len();

    let mut out = Vec::with_capacity(gaps.len());
    for &gap in gaps {
        let mut marg_a = vec![0u32; n_cells];
        let mut marg_b = vec![0u32; n_cells];
        let mut joint: HashMap<(u32, u32), u32> = HashMap::new();
        for t in 0..n_t {
            let a = labels[t];
            let b = labels[t + gap];
            marg_a[a as usize] += 1;
            marg_b[b as usize] += 1;
            *joint.entry((a, b)).or_insert(0) += 1;
        }
        let floor = opts.min_occupancy as u32;
        let qual_a: Vec<u32> =
            (0..n_cells as u32).filter(|&i| marg_a[i as usize] >= floor).collect();
        let qual_b: Vec<u32> =
            (0..n_cells as u32).filter(|&i| marg_b[i as usize] >= floor).collect();
        if qual_a.len() < 2 || qual_b.len() < 2 {
            return Err(MixingError::InsufficientSamples(qual_a.len().min(qual_b.len())));
        }
        let n_f = n_t as f64;
        let mut alpha = 0.0f64;
        let mut best_p = 0.0f64;
        let mut pair_covariances = Vec::with_capacity(qual_a.len() * qual_b.len());
        for &a in &qual_a {
            let pa = marg_a[a as usize] as f64 / n_f;
            for &b in &qual_b {
                let pb = marg_b[b as usize] as f64 / n_f;
                let pab = joint.get(&(a, b)).copied().unwrap_or(0) as f64 / n_f;
                let cov = pab - pa * pb;
                pair_covariances.push(cov);
                if cov.abs() > alpha {
                    alpha = cov.abs();
                    best_p = pab;
                }
            }
        }
        let stderr = (best_p * (1.0 - best_p) / n_f).sqrt();
        out.push(MixingEstimate {
            gap,
            depth,
            alpha,
            sample_size: n_t,
            stderr,
            pair_covariances,
        });
    }
    Ok(out)
}

/// Alpha-mixing estimate at a single `(depth, gap)` pair.
pub fn alpha_mixing_estimate(
    table: &BilliardTable,
    measure: &SrbMeasure,
    depth: usize,
    gap: usize,
    n_samples: usize,
    rng: &mut impl Rng,
    opts: MixingOptions,
) -> Result<MixingEstimate, MixingError> {
    Ok(alpha_mixing_profile(table, measure, depth, &[gap], n_samples, rng, opts)?
        .pop()
        .expect("one gap in, one estimate out"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::BilliardTable;
    use crate::rng::orbit_rng;

    fn profile(gaps: &[usize], seed: u64, n: usize) -> Vec<MixingEstimate> {
        let t = BilliardTable::canonical_three_disk();
        let m = SrbMeasure::new(&t);
        let mut rng = orbit_rng(seed, 0);
        alpha_mixing_profile(&t, &m, 1, gaps, n, &mut rng, MixingOptions::default()).unwrap()
    }

    #[test]
    fn alpha_at_gap_zero_sees_indicator_variance() {
        let e = &profile(&[0], 31, 200_000)[0];
        // with A = B the covariance is p(1-p) > 0 for any qualified cell
        assert!(e.alpha > 0.01, "alpha(0) = {}", e.alpha);
        assert!(e.alpha <= 1.0);
    }

    #[test]
    fn alpha_is_bounded_by_one() {
        for e in profile(&[0, 1, 3], 32, 120_000) {
            assert!(e.alpha >= 0.0 && e.alpha <= 1.0);
        }
    }

    #[test]
    fn covariances_are_dominated_by_alpha() {
        let e = &profile(&[2], 33, 120_000)[0];
        for c in &e.pair_covariances {
            assert!(c.abs() <= e.alpha + 1e-15);
        }
    }

    #[test]
    fn alpha_decays_with_gap() {
        // log alpha(n) over n = 1..8 has a negative fitted slope
        let gaps: Vec<usize> = (1..=8).collect();
        let es = profile(&gaps, 34, 300_000);
        let xs: Vec<f64> = gaps.iter().map(|&g| g as f64).collect();
        let ys: Vec<f64> = es.iter().map(|e| e.alpha.ln()).collect();
        let (slope, _, _) = crate::stats::ols(&xs, &ys);
        assert!(slope < 0.0, "slope {slope}; alphas {ys:?}");
    }

    #[test]
    fn average_alpha_is_monotone_within_tolerance() {
        // statistical monotonicity over 5 seeds with one pooled-SE slack
        let gaps: Vec<usize> = (1..=8).collect();
        let runs: Vec<Vec<MixingEstimate>> =
            [101u64, 102, 103, 104, 105].iter().map(|&s| profile(&gaps, s, 150_000)).collect();
        let mut means = Vec::new();
        let mut ses = Vec::new();
        for i in 0..gaps.len() {
            let vals: Vec<f64> = runs.iter().map(|r| r[i].alpha).collect();
            let (m, se) = crate::stats::mean_and_se(&vals);
            means.push(m);
            ses.push(se);
        }
        for i in 0..means.len() - 1 {
            let pooled = (ses[i] * ses[i] + ses[i + 1] * ses[i + 1]).sqrt();
            assert!(
                means[i + 1] <= means[i] + pooled,
                "gap {} -> {}: {} vs {} (pooled se {pooled})",
                i + 1,
                i + 2,
                means[i + 1],
                means[i]
            );
        }
    }
}
