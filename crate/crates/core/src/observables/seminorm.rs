//! Empirical probe of the dynamically Holder seminorm growth
//! `|f_n|_theta ~ n^beta`.

use crate::dynamics::{BilliardTable, PhasePoint};
use crate::measure::{separation_time, SeparationResult, SrbMeasure};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error("only {0} usable pairs with finite separation times")]
    InsufficientPairs(usize),
}

/// Fitted growth exponent of the sampled Holder quotients.
#[derive(Debug, Clone)]
pub struct SeminormProbe {
    pub ns: Vec<usize>,
    /// Sup over pairs of `|f_n(x) - f_n(y)| / theta^{s(x,y)}` per `n`.
    pub sup_quotients: Vec<f64>,
    /// Log-log slope of the sup quotient against `n`.
    pub beta_hat: f64,
    pub pairs_used: usize,
}

/// Sample nearby pairs with known separation times.
///
/// Saturated pairs are dropped: the quotient denominator collapses to
/// `theta^{n_max}` while the numerator carries only round-off, so they
/// hold no scale information.
pub fn sample_separation_pairs(
    table: &BilliardTable,
    measure: &SrbMeasure,
    n_pairs: usize,
    delta: f64,
    n_max: usize,
    rng: &mut impl Rng,
) -> Vec<(PhasePoint, PhasePoint, usize)> {
    let mut pairs = Vec::with_capacity(n_pairs);
    let mut attempts = 0;
    while pairs.len() < n_pairs && attempts < 50 * n_pairs {
        attempts += 1;
        let x = measure.sample(rng);
        let dr = delta * rng.gen_range(-1.0..1.0f64);
        let dphi = delta * rng.gen_range(-1.0..1.0f64);
        let y = PhasePoint {
            scatterer: x.scatterer,
            r: (x.r + dr).rem_euclid(table.scatterers()[x.scatterer].circumference()),
            phi: (x.phi + dphi).clamp(-1.55, 1.55),
        };
        if let SeparationResult::Separated(s) = separation_time(table, &x, &y, n_max) {
            if s >= 1 {
                pairs.push((x, y, s));
            }
        }
    }
    pairs
}

/// Estimate the growth exponent `beta` of the family `f_n` from Holder
/// quotients over a fixed pair sample.
pub fn seminorm_growth_probe(
    ns: &[usize],
    f: impl Fn(usize, &PhasePoint) -> f64,
    pairs: &[(PhasePoint, PhasePoint, usize)],
    theta: f64,
) -> Result<SeminormProbe, ProbeError> {
    if pairs.len() < 8 {
        return Err(ProbeError::InsufficientPairs(pairs.len()));
    }
    let mut sup_quotients = Vec::with_capacity(ns.len());
    for &n in ns {
        let mut sup = 0.0f64;
        for (x, y, s) in pairs {
            let q = (f(n, x) - f(n, y)).abs() / theta.powi(*s as i32);
            sup = sup.max(q);
        }
        sup_quotients.push(sup);
    }
    // all-zero quotients (constant family): report beta = 0
    let beta_hat = if sup_quotients.iter().all(|&q| q == 0.0) {
        0.0
    } else {
        let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
        let ys: Vec<f64> = sup_quotients.iter().map(|&q| q.max(f64::MIN_POSITIVE).ln()).collect();
        crate::stats::ols(&xs, &ys).0
    };
    Ok(SeminormProbe { ns: ns.to_vec(), sup_quotients, beta_hat, pairs_used: pairs.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::{Observable, ObservableSpec, ShrinkingTargetFamily};
    use crate::rng::orbit_rng;

    #[test]
    fn modulated_family_recovers_its_exponent() {
        let t = BilliardTable::canonical_three_disk();
        let m = SrbMeasure::new(&t);
        let mut rng = orbit_rng(61, 0);
        let pairs = sample_separation_pairs(&t, &m, 60, 1e-6, 25, &mut rng);
        let g = Observable::new(ObservableSpec::TrigBoundary { frequency: 1 }).unwrap();
        let ns = [4usize, 16, 64, 256];
        let probe = seminorm_growth_probe(
            &ns,
            |n, p| (n as f64).sqrt() * g.eval_billiard(&t, p).unwrap(),
            &pairs,
            0.5,
        )
        .unwrap();
        assert!(
            (probe.beta_hat - 0.5).abs() < 0.1,
            "beta_hat {} (sups {:?})",
            probe.beta_hat,
            probe.sup_quotients
        );
    }

    #[test]
    fn constant_family_has_zero_quotients() {
        let t = BilliardTable::canonical_three_disk();
        let m = SrbMeasure::new(&t);
        let mut rng = orbit_rng(62, 0);
        let pairs = sample_separation_pairs(&t, &m, 40, 1e-6, 25, &mut rng);
        let probe = seminorm_growth_probe(&[2, 8, 32], |_, _| 7.5, &pairs, 0.5).unwrap();
        assert!(probe.sup_quotients.iter().all(|&q| q == 0.0));
        assert_eq!(probe.beta_hat, 0.0);
    }

    #[test]
    fn target_indicator_probe_is_finite() {
        let t = BilliardTable::canonical_three_disk();
        let m = SrbMeasure::new(&t);
        let mut rng = orbit_rng(63, 0);
        let pairs = sample_separation_pairs(&t, &m, 80, 1e-5, 25, &mut rng);
        let family = ShrinkingTargetFamily::new(0.5, 0.1, 0.5, 1024).unwrap();
        let probe = seminorm_growth_probe(
            &[4, 16, 64, 256],
            |n, p| if family.contains(n, p) { 1.0 } else { 0.0 },
            &pairs,
            0.5,
        )
        .unwrap();
        assert!(probe.beta_hat.is_finite());
    }

    #[test]
    fn too_few_pairs_is_an_error() {
        let probe = seminorm_growth_probe(&[2, 4], |_, p: &PhasePoint| p.phi, &[], 0.5);
        assert!(matches!(probe, Err(ProbeError::InsufficientPairs(0))));
    }
}
