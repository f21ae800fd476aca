//! Deterministic parallel simulation of series ensembles.
//!
//! Per-orbit series are streamed into prefix sums recorded at a fixed
//! checkpoint set, so memory stays flat in the ensemble size times the
//! number of checkpoints even for long horizons. Orbit substreams come
//! from [`crate::rng::orbit_rng`], and reductions run in orbit-index
//! order, so results are byte-stable for a fixed master seed regardless
//! of the worker count.

use crate::dynamics::{cat_step, BilliardTable, CatMapState, CAT_LOG_EXPANSION};
use crate::measure::SrbMeasure;
use crate::observables::{Observable, ObservableSpec, ShrinkingTargetFamily};
use crate::rng::orbit_rng;
use crate::stats::{self, KsResult};
use rand::{Rng, RngCore};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnsembleError {
    #[error("checkpoint {0} missing from the simulated grid")]
    MissingCheckpoint(usize),
    #[error("ensemble variance is degenerate at n = {0}")]
    DegenerateVariance(usize),
    #[error("observable cannot be evaluated on the selected system")]
    SystemMismatch,
    #[error("all {0} orbits truncated")]
    AllTruncated(usize),
}

/// Observable sequence modes: stationary, shrinking targets and
/// polynomially modulated.
#[derive(Debug, Clone)]
pub enum ObservableSeq {
    /// `f_n = f` for all `n`.
    Stationary(Observable),
    /// `f_n = 1_{A_n}` (optionally centered by the exact masses).
    Targets { family: ShrinkingTargetFamily, centered: bool },
    /// `f_n = (n+1)^exponent * f` for a centered base `f`.
    Modulated { base: Observable, exponent: f64 },
}

/// The process generator: which system drives the orbit and which
/// observable sequence reads it. `IidNormal` is the synthetic oracle
/// baseline used to pin the statistical gates.
#[derive(Debug, Clone, Copy)]
pub enum ProcessSpec<'a> {
    Billiard { table: &'a BilliardTable, seq: &'a ObservableSeq },
    CatMap { seq: &'a ObservableSeq },
    IidNormal,
}

/// Ensemble of per-orbit partial sums at fixed checkpoints.
#[derive(Debug, Clone)]
pub struct SeriesEnsemble {
    pub n_max: usize,
    pub master_seed: u64,
    /// Sorted checkpoint indices; `prefix_sums[e][i]` holds
    /// `S_c = sum_{k<c} X_k` at `c = checkpoints[i]` for orbit `e`.
    pub checkpoints: Vec<usize>,
    pub prefix_sums: Vec<Vec<f64>>,
    /// Orbits dropped because of grazing truncation.
    pub truncated: usize,
    /// Set when the exclusion fraction reaches 1%.
    pub flagged: bool,
}

impl SeriesEnsemble {
    pub fn size(&self) -> usize {
        self.prefix_sums.len()
    }

    fn checkpoint_index(&self, n: usize) -> Result<usize, EnsembleError> {
        self.checkpoints
            .binary_search(&n)
            .map_err(|_| EnsembleError::MissingCheckpoint(n))
    }

    /// Partial sums `S_n` across the ensemble (`S_0 = 0` by convention).
    pub fn partial_sums_at(&self, n: usize) -> Result<Vec<f64>, EnsembleError> {
        if n == 0 {
            return Ok(vec![0.0; self.size()]);
        }
        let i = self.checkpoint_index(n)?;
        Ok(self.prefix_sums.iter().map(|row| row[i]).collect())
    }
}

/// Standard normal via Box-Muller on explicit 53-bit uniforms; keeps the
/// stream stable across `rand` versions.
fn std_normal(rng: &mut impl RngCore) -> f64 {
    let u1 = ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / 9_007_199_254_740_992.0);
    let u2 = (rng.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Stream one orbit's increments into `sink(k, x_k)` for `k < n_max`.
/// Returns the truncation step if the orbit ends early.
fn stream_orbit(
    process: ProcessSpec,
    n_max: usize,
    rng: &mut impl Rng,
    sink: &mut impl FnMut(usize, f64),
) -> Result<(), usize> {
    match process {
        ProcessSpec::IidNormal => {
            for k in 0..n_max {
                sink(k, std_normal(rng));
            }
            Ok(())
        }
        ProcessSpec::CatMap { seq } => {
            let mut s = CatMapState::new(rng.gen::<f64>(), rng.gen::<f64>());
            for k in 0..n_max {
                let x = match seq {
                    ObservableSeq::Stationary(obs) => eval_cat_fast(obs, &s),
                    ObservableSeq::Modulated { base, exponent } => {
                        ((k + 1) as f64).powf(*exponent) * eval_cat_fast(base, &s)
                    }
                    ObservableSeq::Targets { .. } => f64::NAN,
                };
                sink(k, x);
                s = cat_step(s);
            }
            Ok(())
        }
        ProcessSpec::Billiard { table, seq } => {
            let measure = SrbMeasure::new(table);
            let mut p = measure.sample(rng);
            match seq {
                ObservableSeq::Stationary(obs)
                    if matches!(obs.spec, ObservableSpec::LogUnstableJacobian { .. }) =>
                {
                    let ObservableSpec::LogUnstableJacobian { warmup } = obs.spec else {
                        unreachable!()
                    };
                    // forward cone warmup, then per-step factors are the series
                    let mut v = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2];
                    for k in 0..warmup + n_max {
                        let res = table.next_collision(&p).map_err(|_| k.saturating_sub(warmup))?;
                        let w = res.d_map.apply(v);
                        let norm = (w[0] * w[0] + w[1] * w[1]).sqrt();
                        if k >= warmup {
                            sink(k - warmup, norm.ln() - obs.center_value());
                        }
                        v = [w[0] / norm, w[1] / norm];
                        p = res.next;
                    }
                    Ok(())
                }
                ObservableSeq::Stationary(obs)
                    if matches!(obs.spec, ObservableSpec::Coboundary { .. }) =>
                {
                    let ObservableSpec::Coboundary { ref base } = obs.spec else { unreachable!() };
                    let base_obs = Observable::new((**base).clone()).expect("validated");
                    let mut g_cur = base_obs.eval_billiard(table, &p).map_err(|_| 0usize)?;
                    for k in 0..n_max {
                        let res = table.next_collision(&p).map_err(|_| k)?;
                        let g_next = base_obs.eval_billiard(table, &res.next).map_err(|_| k)?;
                        sink(k, g_cur - g_next - obs.center_value());
                        g_cur = g_next;
                        p = res.next;
                    }
                    Ok(())
                }
                _ => {
                    for k in 0..n_max {
                        let x = match seq {
                            ObservableSeq::Stationary(obs) => {
                                obs.eval_billiard(table, &p).map_err(|_| k)?
                            }
                            ObservableSeq::Targets { family, centered } => {
                                let hit = if family.contains(k, &p) { 1.0 } else { 0.0 };
                                if *centered {
                                    hit - family.mass(k)
                                } else {
                                    hit
                                }
                            }
                            ObservableSeq::Modulated { base, exponent } => {
                                ((k + 1) as f64).powf(*exponent)
                                    * base.eval_billiard(table, &p).map_err(|_| k)?
                            }
                        };
                        sink(k, x);
                        if k + 1 < n_max {
                            let res = table.next_collision(&p).map_err(|_| k)?;
                            p = res.next;
                        }
                    }
                    Ok(())
                }
            }
        }
    }
}

fn eval_cat_fast(obs: &Observable, s: &CatMapState) -> f64 {
    match &obs.spec {
        ObservableSpec::CatCharacter { k } => {
            (2.0 * std::f64::consts::PI * (k[0] as f64 * s.x + k[1] as f64 * s.y)).cos()
                - obs.center_value()
        }
        ObservableSpec::LogUnstableJacobian { .. } => CAT_LOG_EXPANSION - obs.center_value(),
        _ => obs.eval_cat(s).unwrap_or(f64::NAN),
    }
}

/// Validate that the observable sequence can run on the system.
fn validate_process(process: &ProcessSpec) -> Result<(), EnsembleError> {
    let cat_ok = |spec: &ObservableSpec| {
        matches!(
            spec,
            ObservableSpec::CatCharacter { .. }
                | ObservableSpec::Coboundary { .. }
                | ObservableSpec::LogUnstableJacobian { .. }
        )
    };
    match process {
        ProcessSpec::CatMap { seq } => match seq {
            ObservableSeq::Stationary(obs) if cat_ok(&obs.spec) => Ok(()),
            ObservableSeq::Modulated { base, .. } if cat_ok(&base.spec) => Ok(()),
            _ => Err(EnsembleError::SystemMismatch),
        },
        ProcessSpec::Billiard { seq, .. } => match seq {
            ObservableSeq::Stationary(obs) | ObservableSeq::Modulated { base: obs, .. } => {
                if matches!(obs.spec, ObservableSpec::CatCharacter { .. }) {
                    Err(EnsembleError::SystemMismatch)
                } else {
                    Ok(())
                }
            }
            ObservableSeq::Targets { .. } => Ok(()),
        },
        ProcessSpec::IidNormal => Ok(()),
    }
}

/// Simulate `size` independent orbits and record partial sums at the
/// given checkpoints (sorted, deduplicated, `n_max` appended).
pub fn simulate_process(
    process: ProcessSpec,
    n_max: usize,
    size: usize,
    master_seed: u64,
    checkpoints: &[usize],
) -> Result<SeriesEnsemble, EnsembleError> {
    validate_process(&process)?;
    let mut cps: Vec<usize> = checkpoints.iter().copied().filter(|&c| c >= 1 && c <= n_max).collect();
    cps.push(n_max);
    cps.sort_unstable();
    cps.dedup();

    let rows: Vec<Option<Vec<f64>>> = (0..size)
        .into_par_iter()
        .map(|e| {
            let mut rng = orbit_rng(master_seed, e as u64);
            let mut row = Vec::with_capacity(cps.len());
            let mut sum = 0.0f64;
            let mut next_cp = 0usize;
            let ok = {
                let mut sink = |k: usize, x: f64| {
                    // record S_c = sum_{j<c} X_j before adding X_c
                    while next_cp < cps.len() && cps[next_cp] == k {
                        row.push(sum);
                        next_cp += 1;
                    }
                    sum += x;
                };
                stream_orbit(process, n_max, &mut rng, &mut sink).is_ok()
            };
            if !ok {
                return None;
            }
            while next_cp < cps.len() {
                row.push(sum);
                next_cp += 1;
            }
            Some(row)
        })
        .collect();

    let mut prefix_sums = Vec::with_capacity(size);
    let mut truncated = 0usize;
    for row in rows {
        match row {
            Some(r) => prefix_sums.push(r),
            None => truncated += 1,
        }
    }
    if prefix_sums.is_empty() {
        return Err(EnsembleError::AllTruncated(size));
    }
    let flagged = truncated as f64 >= 0.01 * size as f64;
    Ok(SeriesEnsemble { n_max, master_seed, checkpoints: cps, prefix_sums, truncated, flagged })
}

/// One long orbit's raw increment series (for Green-Kubo, ASCLT, LIL).
pub fn simulate_series(
    process: ProcessSpec,
    n: usize,
    master_seed: u64,
    orbit_index: u64,
) -> Result<Vec<f64>, EnsembleError> {
    validate_process(&process)?;
    let mut rng = orbit_rng(master_seed, orbit_index);
    let mut out = Vec::with_capacity(n);
    stream_orbit(process, n, &mut rng, &mut |_, x| out.push(x))
        .map_err(|_| EnsembleError::AllTruncated(1))?;
    Ok(out)
}

/// Ensemble variance of `S_n` over a grid.
#[derive(Debug, Clone)]
pub struct VarianceCurve {
    pub ns: Vec<usize>,
    pub variances: Vec<f64>,
    /// `sigma^2 sqrt(2/(E-1))`.
    pub stderrs: Vec<f64>,
}

pub fn variance_curve(ens: &SeriesEnsemble, grid: &[usize]) -> Result<VarianceCurve, EnsembleError> {
    let mut ns = Vec::with_capacity(grid.len());
    let mut variances = Vec::with_capacity(grid.len());
    let mut stderrs = Vec::with_capacity(grid.len());
    let e = ens.size() as f64;
    for &n in grid {
        let sums = ens.partial_sums_at(n)?;
        let v = stats::variance(&sums);
        ns.push(n);
        variances.push(v);
        stderrs.push(v * (2.0 / (e - 1.0)).sqrt());
    }
    Ok(VarianceCurve { ns, variances, stderrs })
}

/// Fitted Marcinkiewicz-Zygmund exponents.
#[derive(Debug, Clone)]
pub struct MomentScaling {
    pub grid: Vec<usize>,
    /// `||S_n||_{L^2}` per grid point.
    pub l2_norms: Vec<f64>,
    /// `sup_m ||S_{m+n} - S_m||_{L^p}` per grid point (coarse m grid).
    pub lp_sups: Vec<f64>,
    pub kappa2: f64,
    pub kappa2_se: f64,
    pub kappa_p: f64,
    pub kappa_p_se: f64,
    pub p: f64,
}

/// Checkpoints needed by [`moment_scaling_fit`] for a window grid: each
/// grid `n` contributes `{0, n, 2n, 4n}` window starts capped at
/// `n_max - n`.
pub fn moment_checkpoints(grid: &[usize], n_max: usize) -> Vec<usize> {
    let mut cps = Vec::new();
    for &n in grid {
        cps.push(n);
        for m_mult in [0usize, 1, 2, 4] {
            let m = m_mult * n;
            if m + n <= n_max {
                cps.push(m);
                cps.push(m + n);
            }
        }
    }
    cps.sort_unstable();
    cps.dedup();
    cps.retain(|&c| c >= 1);
    cps
}

/// Least-squares fit of `log ||S_n||_2` and of the windowed
/// `log sup_m ||sum_{k=m}^{m+n-1} X_k||_p` against `log n`.
pub fn moment_scaling_fit(
    ens: &SeriesEnsemble,
    grid: &[usize],
    p: f64,
) -> Result<MomentScaling, EnsembleError> {
    let mut l2_norms = Vec::with_capacity(grid.len());
    let mut lp_sups = Vec::with_capacity(grid.len());
    for &n in grid {
        let sums = ens.partial_sums_at(n)?;
        let m2 = sums.iter().map(|s| s * s).sum::<f64>() / sums.len() as f64;
        l2_norms.push(m2.sqrt());
        let mut sup = 0.0f64;
        for m_mult in [0usize, 1, 2, 4] {
            let m = m_mult * n;
            if m + n > ens.n_max {
                continue;
            }
            let a = ens.partial_sums_at(m)?;
            let b = ens.partial_sums_at(m + n)?;
            let mp = a
                .iter()
                .zip(&b)
                .map(|(sa, sb)| (sb - sa).abs().powf(p))
                .sum::<f64>()
                / a.len() as f64;
            sup = sup.max(mp.powf(1.0 / p));
        }
        lp_sups.push(sup);
    }
    let xs: Vec<f64> = grid.iter().map(|&n| (n as f64).ln()).collect();
    let y2: Vec<f64> = l2_norms.iter().map(|v| v.ln()).collect();
    let yp: Vec<f64> = lp_sups.iter().map(|v| v.ln()).collect();
    let (kappa2, _, kappa2_se) = stats::ols(&xs, &y2);
    let (kappa_p, _, kappa_p_se) = stats::ols(&xs, &yp);
    Ok(MomentScaling {
        grid: grid.to_vec(),
        l2_norms,
        lp_sups,
        kappa2,
        kappa2_se,
        kappa_p,
        kappa_p_se,
        p,
    })
}

/// KS distance of `S_n / sigma_n` from the standard normal.
pub fn clt_ks(ens: &SeriesEnsemble, n: usize) -> Result<KsResult, EnsembleError> {
    let sums = ens.partial_sums_at(n)?;
    let sd = stats::variance(&sums).sqrt();
    if !(sd > 0.0) {
        return Err(EnsembleError::DegenerateVariance(n));
    }
    let m = stats::mean(&sums);
    let mut zs: Vec<f64> = sums.iter().map(|s| (s - m) / sd).collect();
    let d = stats::ks_statistic(&mut zs, stats::std_normal_cdf);
    Ok(KsResult { statistic: d, sample_size: zs.len(), law: "N(0,1)" })
}

/// One scaled-path covariance against the Brownian `min(s, t)`.
#[derive(Debug, Clone, Copy)]
pub struct WipPoint {
    pub s: f64,
    pub t: f64,
    pub covariance: f64,
    pub brownian: f64,
}

/// Empirical covariances of the scaled partial-sum path at pairs of
/// times, compared with `min(s, t)`.
pub fn wip_covariance_check(
    ens: &SeriesEnsemble,
    n: usize,
    times: &[(f64, f64)],
) -> Result<Vec<WipPoint>, EnsembleError> {
    let base = ens.partial_sums_at(n)?;
    let sd = stats::variance(&base).sqrt();
    if !(sd > 0.0) {
        return Err(EnsembleError::DegenerateVariance(n));
    }
    let mut out = Vec::with_capacity(times.len());
    for &(s, t) in times {
        let i = ((n as f64 * s).floor() as usize).max(1);
        let j = ((n as f64 * t).floor() as usize).max(1);
        let a = ens.partial_sums_at(i)?;
        let b = ens.partial_sums_at(j)?;
        let ma = stats::mean(&a);
        let mb = stats::mean(&b);
        let cov = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - ma) * (y - mb))
            .sum::<f64>()
            / (a.len() as f64 - 1.0)
            / (sd * sd);
        out.push(WipPoint { s, t, covariance: cov, brownian: s.min(t) });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_observable_gives_sn_equal_n() {
        // the cat-map log-Jacobian is exactly constant, so S_n = n * c
        let obs = Observable::new(ObservableSpec::LogUnstableJacobian { warmup: 0 }).unwrap();
        let seq = ObservableSeq::Stationary(obs);
        let ens =
            simulate_process(ProcessSpec::CatMap { seq: &seq }, 100, 1, 7, &[10, 50]).unwrap();
        let s10 = ens.partial_sums_at(10).unwrap()[0];
        let s100 = ens.partial_sums_at(100).unwrap()[0];
        assert!((s10 - 10.0 * CAT_LOG_EXPANSION).abs() < 1e-12);
        assert!((s100 - 100.0 * CAT_LOG_EXPANSION).abs() < 1e-10);
    }

    #[test]
    fn identical_seeds_are_bit_identical() {
        let seq = ObservableSeq::Stationary(
            Observable::new(ObservableSpec::CatCharacter { k: [1, 0] }).unwrap(),
        );
        let a = simulate_process(ProcessSpec::CatMap { seq: &seq }, 500, 16, 99, &[100, 500])
            .unwrap();
        let b = simulate_process(ProcessSpec::CatMap { seq: &seq }, 500, 16, 99, &[100, 500])
            .unwrap();
        assert_eq!(a.prefix_sums, b.prefix_sums);
    }

    #[test]
    fn iid_variance_grows_linearly() {
        let grid = [64usize, 256, 1024];
        let ens = simulate_process(ProcessSpec::IidNormal, 1024, 4000, 5, &grid).unwrap();
        let vc = variance_curve(&ens, &grid).unwrap();
        for (i, &n) in grid.iter().enumerate() {
            let v = vc.variances[i];
            assert!(
                (v - n as f64).abs() < 3.0 * n as f64 * (2.0 / 4000.0f64).sqrt(),
                "var at {n}: {v}"
            );
        }
    }

    #[test]
    fn iid_moment_scaling_near_half() {
        let grid = [32usize, 128, 512, 2048];
        let cps = moment_checkpoints(&grid, 16384);
        let ens = simulate_process(ProcessSpec::IidNormal, 16384, 1500, 6, &cps).unwrap();
        let ms = moment_scaling_fit(&ens, &grid, 4.0).unwrap();
        assert!((ms.kappa2 - 0.5).abs() < 0.05, "kappa2 {}", ms.kappa2);
        assert!((ms.kappa_p - 0.5).abs() < 0.05, "kappa4 {}", ms.kappa_p);
    }

    #[test]
    fn iid_clt_ks_small() {
        let ens = simulate_process(ProcessSpec::IidNormal, 256, 4000, 8, &[256]).unwrap();
        let ks = clt_ks(&ens, 256).unwrap();
        assert!(ks.statistic < 1.63 / (4000.0f64).sqrt() * 1.5, "KS {}", ks.statistic);
    }

    #[test]
    fn iid_wip_covariances_match_brownian() {
        let n = 1000;
        let cps = [250usize, 500, 750, 1000];
        let ens = simulate_process(ProcessSpec::IidNormal, n, 4000, 9, &cps).unwrap();
        let pts = wip_covariance_check(&ens, n, &[(0.25, 1.0), (0.5, 1.0), (0.5, 0.75), (1.0, 1.0)])
            .unwrap();
        for p in pts {
            assert!(
                (p.covariance - p.brownian).abs() < 0.05,
                "cov({}, {}) = {} vs {}",
                p.s,
                p.t,
                p.covariance,
                p.brownian
            );
        }
    }

    #[test]
    fn stationary_centered_mean_is_zero() {
        let t = BilliardTable::canonical_three_disk();
        let obs = Observable::centered(ObservableSpec::NegLogCosPhi).unwrap();
        let seq = ObservableSeq::Stationary(obs);
        let ens = simulate_process(
            ProcessSpec::Billiard { table: &t, seq: &seq },
            400,
            600,
            10,
            &[400],
        )
        .unwrap();
        let sums = ens.partial_sums_at(400).unwrap();
        let (m, se) = stats::mean_and_se(&sums);
        assert!(m.abs() < 3.0 * se, "ensemble mean {m} (se {se})");
        assert!(!ens.flagged, "truncation excess: {}", ens.truncated);
    }

    #[test]
    fn cat_wip_covariance_is_brownian() {
        // scaled-path covariance at (s, t) = (0.5, 1.0) approaches
        // min(s, t) for the character observable
        let seq = ObservableSeq::Stationary(
            Observable::new(ObservableSpec::CatCharacter { k: [1, 0] }).unwrap(),
        );
        let n = 1000;
        let ens = simulate_process(ProcessSpec::CatMap { seq: &seq }, n, 4000, 12, &[500, 1000])
            .unwrap();
        let pts = wip_covariance_check(&ens, n, &[(0.5, 1.0), (1.0, 1.0)]).unwrap();
        assert!(
            (pts[0].covariance - 0.5).abs() < 0.05,
            "cov(0.5, 1.0) = {}",
            pts[0].covariance
        );
        assert!((pts[1].covariance - 1.0).abs() < 1e-9, "normalization at (1, 1)");
    }

    #[test]
    fn coboundary_variance_stays_bounded() {
        // degenerate Green-Kubo case: partial sums of g - g o T telescope,
        // so the variance curve is flat in n
        let t = BilliardTable::canonical_three_disk();
        let obs = Observable::new(ObservableSpec::Coboundary {
            base: Box::new(ObservableSpec::TrigBoundary { frequency: 1 }),
        })
        .unwrap();
        let seq = ObservableSeq::Stationary(obs);
        let grid = [1_000usize, 10_000];
        let ens = simulate_process(
            ProcessSpec::Billiard { table: &t, seq: &seq },
            10_000,
            600,
            11,
            &grid,
        )
        .unwrap();
        let vc = variance_curve(&ens, &grid).unwrap();
        let pooled = (vc.stderrs[0] * vc.stderrs[0] + vc.stderrs[1] * vc.stderrs[1]).sqrt();
        assert!(
            (vc.variances[1] - vc.variances[0]).abs() <= 3.0 * pooled,
            "variance curve not flat: {:?} (pooled se {pooled})",
            vc.variances
        );
    }

    #[test]
    fn cat_character_on_billiard_is_rejected() {
        let t = BilliardTable::canonical_three_disk();
        let seq = ObservableSeq::Stationary(
            Observable::new(ObservableSpec::CatCharacter { k: [1, 0] }).unwrap(),
        );
        let err = simulate_process(ProcessSpec::Billiard { table: &t, seq: &seq }, 10, 2, 1, &[10]);
        assert!(matches!(err, Err(EnsembleError::SystemMismatch)));
    }

    #[test]
    fn missing_checkpoint_is_reported() {
        let ens = simulate_process(ProcessSpec::IidNormal, 100, 10, 2, &[50]).unwrap();
        assert!(matches!(
            ens.partial_sums_at(77),
            Err(EnsembleError::MissingCheckpoint(77))
        ));
    }
}
