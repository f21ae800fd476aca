//! The SRB measure `d mu = c cos(phi) dr dphi` with `c = 1/(2 |dQ|)`,
//! its inverse-CDF sampler and quadrature.
//!
//! Quadrature substitutes `u = sin phi`, which turns the measure into the
//! flat `c dr du` on `[0, |dQ|] x [-1, 1]` and leaves only the integrand
//! singularity (if any) at `u = +-1`. Panels are graded geometrically
//! toward the endpoints so integrable log-type singularities converge,
//! while genuinely divergent integrands keep growing as the grading
//! deepens and fail the Cauchy test.

use crate::dynamics::{BilliardTable, PhasePoint};
use rand::Rng;
use thiserror::Error;

/// `E[-log cos phi] = 1 - ln 2` under the SRB measure.
pub const NEG_LOG_COS_MEAN: f64 = 0.306_852_819_440_054_7;

/// 8-point Gauss-Legendre nodes and weights on `[-1, 1]`.
const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_2,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329_0,
    -0.183_434_642_495_650_0,
    0.183_434_642_495_650_0,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362_0,
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error("quadrature fails the Cauchy refinement test (deltas {first:.3e} -> {second:.3e})")]
    Divergence { first: f64, second: f64 },
    #[error("integrand could not be evaluated at a node: {0}")]
    Eval(String),
}

/// The analytic SRB measure of a billiard table.
#[derive(Debug, Clone, Copy)]
pub struct SrbMeasure<'a> {
    table: &'a BilliardTable,
    normalizer: f64,
}

impl<'a> SrbMeasure<'a> {
    pub fn new(table: &'a BilliardTable) -> Self {
        Self { table, normalizer: 1.0 / (2.0 * table.boundary_length()) }
    }

    pub fn table(&self) -> &'a BilliardTable {
        self.table
    }

    /// Density normalizer `c = 1 / (2 |dQ|)`.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    /// Draw from the SRB measure: `r` uniform on the boundary
    /// (length-weighted across scatterers), `sin phi` uniform on
    /// `[-1, 1]`.
    pub fn sample(&self, rng: &mut impl Rng) -> PhasePoint {
        let mut s = rng.gen_range(0.0..self.table.boundary_length());
        let mut scatterer = self.table.scatterers().len() - 1;
        for (i, sc) in self.table.scatterers().iter().enumerate() {
            if s < sc.circumference() {
                scatterer = i;
                break;
            }
            s -= sc.circumference();
        }
        let u: f64 = rng.gen_range(-1.0..1.0);
        PhasePoint { scatterer, r: s, phi: u.asin() }
    }

    /// Product quadrature of `f` against the measure at a fixed
    /// resolution level (>= 1).
    pub fn expectation(&self, f: impl Fn(&PhasePoint) -> f64, resolution: usize) -> f64 {
        let res = resolution.max(1);
        // grading depth grows with resolution so divergent integrands
        // cannot stabilize under refinement
        let depth = 36 + 4 * res;
        let u_edges = graded_edges(depth, res);
        let mut total = 0.0;
        for (sid, sc) in self.table.scatterers().iter().enumerate() {
            let circ = sc.circumference();
            let n_r = (res * 8).max(4);
            let h_r = circ / n_r as f64;
            for ir in 0..n_r {
                let r0 = ir as f64 * h_r;
                for (gr, wr) in GL_NODES.iter().zip(GL_WEIGHTS) {
                    let r = r0 + 0.5 * h_r * (1.0 + gr);
                    let w_r = wr * 0.5 * h_r;
                    for win in u_edges.windows(2) {
                        let (u0, u1) = (win[0], win[1]);
                        for (gu, wu) in GL_NODES.iter().zip(GL_WEIGHTS) {
                            let u = u0 + 0.5 * (u1 - u0) * (1.0 + gu);
                            let w_u = wu * 0.5 * (u1 - u0);
                            let p = PhasePoint { scatterer: sid, r, phi: u.asin() };
                            total += w_r * w_u * f(&p);
                        }
                    }
                }
            }
        }
        total * self.normalizer
    }

    /// Quadrature with a doubling Cauchy test.
    ///
    /// Returns the refined value and the last refinement delta as an
    /// error estimate; fails with [`QuadratureError::Divergence`] when
    /// refinement increases the change.
    pub fn expectation_checked(
        &self,
        f: impl Fn(&PhasePoint) -> f64 + Copy,
        resolution: usize,
    ) -> Result<(f64, f64), QuadratureError> {
        let i1 = self.expectation(f, resolution);
        let i2 = self.expectation(f, resolution * 2);
        let d1 = (i2 - i1).abs();
        let scale = i2.abs().max(1.0);
        if d1 <= 1e-10 * scale {
            return Ok((i2, d1));
        }
        let i3 = self.expectation(f, resolution * 4);
        let d2 = (i3 - i2).abs();
        if d2 > 0.75 * d1 {
            return Err(QuadratureError::Divergence { first: d1, second: d2 });
        }
        Ok((i3, d2))
    }

    /// `(integral |f|^p dmu)^(1/p)`.
    pub fn lp_norm(
        &self,
        f: impl Fn(&PhasePoint) -> f64 + Copy,
        p: f64,
        resolution: usize,
    ) -> Result<f64, QuadratureError> {
        assert!(p >= 1.0);
        let (v, _) = self.expectation_checked(move |x| f(x).abs().powf(p), resolution)?;
        Ok(v.powf(1.0 / p))
    }
}

/// Panel edges on `[-1, 1]`, geometrically graded toward both endpoints
/// and uniformly refined `refine` times.
fn graded_edges(depth: usize, refine: usize) -> Vec<f64> {
    let mut pos = vec![0.0f64];
    for k in 1..=depth {
        pos.push(1.0 - (2.0f64).powi(-(k as i32)));
    }
    pos.push(1.0);
    let mut edges = Vec::new();
    for win in pos.windows(2) {
        let (a, b) = (win[0], win[1]);
        for i in 0..refine {
            edges.push(a + (b - a) * i as f64 / refine as f64);
        }
    }
    edges.push(1.0);
    let mut full: Vec<f64> = edges.iter().rev().map(|e| -e).collect();
    full.extend(edges.iter().skip(1));
    full
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::orbit_rng;
    use crate::stats;

    fn table() -> BilliardTable {
        BilliardTable::canonical_three_disk()
    }

    #[test]
    fn total_mass_is_one() {
        let t = table();
        let m = SrbMeasure::new(&t);
        assert!((m.expectation(|_| 1.0, 1) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn neg_log_cos_expectation_matches_closed_form() {
        let t = table();
        let m = SrbMeasure::new(&t);
        let (v, _) = m.expectation_checked(|p| -p.phi.cos().ln(), 1).unwrap();
        assert!((v - NEG_LOG_COS_MEAN).abs() < 1e-6, "got {v}");
    }

    #[test]
    fn odd_integrand_vanishes() {
        let t = table();
        let m = SrbMeasure::new(&t);
        assert!(m.expectation(|p| p.phi.sin(), 1).abs() < 1e-10);
    }

    #[test]
    fn doubling_resolution_is_stable() {
        let t = table();
        let m = SrbMeasure::new(&t);
        let a = m.expectation(|p| -p.phi.cos().ln(), 1);
        let b = m.expectation(|p| -p.phi.cos().ln(), 2);
        assert!((a - b).abs() < 1e-7, "delta {:.3e}", (a - b).abs());
    }

    #[test]
    fn lp_norms_of_log_singularity() {
        let t = table();
        let m = SrbMeasure::new(&t);
        let f = |p: &PhasePoint| -p.phi.cos().ln();
        let l1 = m.lp_norm(f, 1.0, 1).unwrap();
        assert!((l1 - NEG_LOG_COS_MEAN).abs() < 1e-8);
        // constant observable: any p gives the constant back
        let l3 = m.lp_norm(|_| 2.0, 3.0, 1).unwrap();
        assert!((l3 - 2.0).abs() < 1e-10);
        // p = 8 moment of the log singularity, frozen from an
        // independent high-precision evaluation of
        // int_0^{pi/2} (-ln cos)^8 cos dphi
        let m8 = m.expectation_checked(|p| (-p.phi.cos().ln()).powi(8), 2).unwrap().0;
        assert!((m8 - 78.828_512_093_778_85).abs() < 1e-3, "got {m8}");
        let l8 = m.lp_norm(f, 8.0, 2).unwrap();
        assert!((l8 - 1.726_177_359_653_120_4).abs() < 1e-5, "got {l8}");
    }

    #[test]
    fn divergent_integrand_detected() {
        let t = table();
        let m = SrbMeasure::new(&t);
        let err = m.expectation_checked(|p| 1.0 / (1.0 - p.phi.sin().abs()).max(f64::MIN_POSITIVE), 1);
        assert!(matches!(err, Err(QuadratureError::Divergence { .. })));
    }

    #[test]
    fn sampler_moments() {
        let t = table();
        let m = SrbMeasure::new(&t);
        let mut rng = orbit_rng(12, 0);
        let n = 1_000_000;
        let mut sum_cos = 0.0;
        let mut sum_sin = 0.0;
        let mut band = 0usize;
        let band_t = 0.1;
        for _ in 0..n {
            let p = m.sample(&mut rng);
            sum_cos += p.phi.cos();
            sum_sin += p.phi.sin();
            if p.phi.sin().abs() >= 1.0 - band_t {
                band += 1;
            }
        }
        let mean_cos = sum_cos / n as f64;
        let mean_sin = sum_sin / n as f64;
        assert!((mean_cos - std::f64::consts::FRAC_PI_4).abs() < 1e-3, "cos mean {mean_cos}");
        assert!(mean_sin.abs() < 2e-3, "sin mean {mean_sin}");
        let freq = band as f64 / n as f64;
        assert!((freq - band_t).abs() < 3.0 * (band_t / n as f64).sqrt(), "band mass {freq}");
    }

    #[test]
    fn sampler_sin_phi_is_uniform() {
        let t = table();
        let m = SrbMeasure::new(&t);
        let mut rng = orbit_rng(13, 0);
        let n = 1_000_000;
        let mut us: Vec<f64> = (0..n).map(|_| m.sample(&mut rng).phi.sin()).collect();
        let d = stats::ks_statistic(&mut us, |u| (u + 1.0) / 2.0);
        assert!(d < 1.63 / (n as f64).sqrt(), "KS {d}");
    }
}
