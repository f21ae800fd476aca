//! Dispersing billiard on the unit torus with circular scatterers.
//!
//! The collision space is parametrized by `(r, phi)`: `r` is arc length
//! along the scatterer boundary (counterclockwise) and `phi` in
//! `[-pi/2, pi/2]` is the angle between the outgoing velocity and the
//! outward normal. Free flights are straight lines on the torus, resolved
//! by searching periodic copies of the scatterers in a widening window.
//!
//! The tangent map of the collision map in these coordinates is
//!
//! ```text
//! dT = -1/cos(phi1) * | tau*K + cos(phi)                      tau            |
//!                     | tau*K*K1 + K*cos(phi1) + K1*cos(phi)  tau*K1 + cos(phi1) |
//! ```
//!
//! with `K`, `K1` the curvatures at the two collision points and `tau`
//! the flight length. Its determinant is `cos(phi)/cos(phi1)`, which is
//! exactly the invariance of the measure `cos(phi) dr dphi`; both facts
//! are pinned by tests against a finite-difference oracle.

use super::mat2::Mat2;
use thiserror::Error;

/// Collisions closer than this to tangential are treated as singular.
pub const DEFAULT_GRAZING_GUARD: f64 = 1e-12;

/// Smallest admissible positive root of the ray-circle quadratic.
const MIN_TAU: f64 = 1e-12;

/// Base half-width of the periodic-copy search window.
const BASE_WINDOW: i32 = 2;

/// Hard cap on window widening before declaring an infinite-horizon ray.
const MAX_WINDOW: i32 = 6;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("scatterer list is empty")]
    Empty,
    #[error("scatterer {index} has non-positive radius {radius}")]
    Degenerate { index: usize, radius: f64 },
    #[error("scatterers {first} and {second} overlap or violate clearance (gap {gap})")]
    Overlap { first: usize, second: usize, gap: f64 },
}

#[derive(Debug, Error)]
pub enum CollisionError {
    #[error("tangential collision (margin {margin:.3e})")]
    Grazing { margin: f64 },
    #[error("no scatterer hit within the search horizon")]
    Horizon,
}

#[derive(Debug, Error)]
pub enum FdError {
    #[error("collision failed during finite differencing: {0}")]
    Collision(#[from] CollisionError),
    #[error("perturbed points land on different singularity branches")]
    SingularityStraddle,
    #[error("grazing margin {margin:.3e} below the oracle validity guard {guard:.3e}")]
    NearSingular { margin: f64, guard: f64 },
}

/// Orbit ended early by a tangential collision.
#[derive(Debug, Error)]
#[error("orbit truncated by a grazing collision at step {at_step}")]
pub struct TruncatedOrbit {
    pub at_step: usize,
}

/// One circular scatterer: center in the unit cell, radius.
#[derive(Debug, Clone, Copy)]
pub struct Scatterer {
    pub center: [f64; 2],
    pub radius: f64,
}

impl Scatterer {
    pub fn circumference(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.radius
    }
}

/// Point of the collision space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub scatterer: usize,
    /// Arc length in `[0, 2 pi R)` of its scatterer.
    pub r: f64,
    /// Reflection angle in `[-pi/2, pi/2]`.
    pub phi: f64,
}

/// Outcome of one application of the collision map.
#[derive(Debug, Clone, Copy)]
pub struct CollisionResult {
    pub next: PhasePoint,
    /// Free-flight length.
    pub tau: f64,
    /// Tangent map in `(r, phi)` coordinates.
    pub d_map: Mat2,
    /// `min(cos phi, cos phi1)`; small values flag proximity to the
    /// singularity set.
    pub grazing_margin: f64,
    /// Lattice translate of the copy that was hit (clamped to +-2).
    /// Together with `next.scatterer` this labels the continuity branch
    /// of the map: branch boundaries are exactly the tangential flights.
    pub offset: [i8; 2],
}

/// Result of iterating the collision map.
#[derive(Debug, Clone)]
pub struct OrbitResult {
    /// `points[0]` is the initial condition; `points[k]` is the k-th
    /// collision, so a complete orbit holds `n + 1` entries.
    pub points: Vec<PhasePoint>,
    /// Scatterer id of each entry of `points`.
    pub itinerary: Vec<usize>,
    /// Lattice offset of each completed flight (`points.len() - 1`
    /// entries).
    pub offsets: Vec<[i8; 2]>,
    pub min_grazing_margin: f64,
    /// Step at which a grazing collision truncated the orbit, if any.
    pub truncated_at: Option<usize>,
}

impl OrbitResult {
    pub fn is_complete(&self) -> bool {
        self.truncated_at.is_none()
    }
}

#[derive(Debug, Clone, Copy)]
struct DiskCopy {
    center: [f64; 2],
    radius: f64,
    id: usize,
}

/// Validated dispersing table on the unit torus.
#[derive(Debug, Clone)]
pub struct BilliardTable {
    scatterers: Vec<Scatterer>,
    /// Cumulative arc offsets, for global boundary position.
    arc_offsets: Vec<f64>,
    boundary_length: f64,
    /// Exact minimum free path: the smallest gap between scatterer
    /// closures over all periodic copies.
    tau_min: f64,
    clearance: f64,
    grazing_guard: f64,
    copies: Vec<DiskCopy>,
}

impl BilliardTable {
    /// Build and validate a table.
    ///
    /// Every pair of scatterer closures, including all periodic
    /// translates, must be separated by at least `clearance`.
    pub fn build(spec: &[([f64; 2], f64)], clearance: f64) -> Result<Self, TableError> {
        if spec.is_empty() {
            return Err(TableError::Empty);
        }
        for (i, &(_, radius)) in spec.iter().enumerate() {
            if !(radius > 0.0) {
                return Err(TableError::Degenerate { index: i, radius });
            }
        }
        let mut tau_min = f64::INFINITY;
        for (i, &(ci, ri)) in spec.iter().enumerate() {
            for (j, &(cj, rj)) in spec.iter().enumerate() {
                for kx in -2i32..=2 {
                    for ky in -2i32..=2 {
                        if i == j && kx == 0 && ky == 0 {
                            continue;
                        }
                        // avoid double-counting unordered pairs in the base cell
                        if j < i && kx == 0 && ky == 0 {
                            continue;
                        }
                        let dx = cj[0] + kx as f64 - ci[0];
                        let dy = cj[1] + ky as f64 - ci[1];
                        let gap = (dx * dx + dy * dy).sqrt() - ri - rj;
                        if gap < clearance {
                            return Err(TableError::Overlap { first: i, second: j, gap });
                        }
                        tau_min = tau_min.min(gap);
                    }
                }
            }
        }
        let scatterers: Vec<Scatterer> =
            spec.iter().map(|&(center, radius)| Scatterer { center, radius }).collect();
        let mut arc_offsets = Vec::with_capacity(scatterers.len());
        let mut boundary_length = 0.0;
        for s in &scatterers {
            arc_offsets.push(boundary_length);
            boundary_length += s.circumference();
        }
        let copies = Self::make_copies(&scatterers, BASE_WINDOW);
        Ok(Self {
            scatterers,
            arc_offsets,
            boundary_length,
            tau_min,
            clearance,
            grazing_guard: DEFAULT_GRAZING_GUARD,
            copies,
        })
    }

    /// The canonical finite-horizon three-disk table used throughout the
    /// test battery. Minimum gap 0.06; sampled free flights stay below
    /// 1.2 so the periodic-copy window never widens.
    pub fn canonical_three_disk() -> Self {
        Self::build(
            &[
                ([0.25, 0.25], 0.28),
                ([0.75, 0.25], 0.16),
                ([0.75, 0.75], 0.28),
            ],
            0.02,
        )
        .expect("canonical table is valid")
    }

    fn make_copies(scatterers: &[Scatterer], window: i32) -> Vec<DiskCopy> {
        let mut copies = Vec::new();
        for (id, s) in scatterers.iter().enumerate() {
            for kx in -window..=window {
                for ky in -window..=window {
                    copies.push(DiskCopy {
                        center: [s.center[0] + kx as f64, s.center[1] + ky as f64],
                        radius: s.radius,
                        id,
                    });
                }
            }
        }
        copies
    }

    pub fn scatterers(&self) -> &[Scatterer] {
        &self.scatterers
    }

    pub fn boundary_length(&self) -> f64 {
        self.boundary_length
    }

    /// Exact minimum free path (smallest inter-scatterer gap).
    pub fn tau_min(&self) -> f64 {
        self.tau_min
    }

    pub fn clearance(&self) -> f64 {
        self.clearance
    }

    pub fn grazing_guard(&self) -> f64 {
        self.grazing_guard
    }

    /// Arc position of `p` along the whole boundary, in
    /// `[0, boundary_length)`.
    pub fn global_arc_position(&self, p: &PhasePoint) -> f64 {
        self.arc_offsets[p.scatterer] + p.r
    }

    /// Time-reversal involution `(r, phi) -> (r, -phi)`; conjugates the
    /// collision map to its inverse.
    pub fn involution(&self, p: &PhasePoint) -> PhasePoint {
        PhasePoint { scatterer: p.scatterer, r: p.r, phi: -p.phi }
    }

    /// Cartesian position and outgoing unit velocity of a phase point.
    pub fn phase_to_ray(&self, p: &PhasePoint) -> ([f64; 2], [f64; 2]) {
        let s = &self.scatterers[p.scatterer];
        let psi = p.r / s.radius;
        let (sin_psi, cos_psi) = psi.sin_cos();
        let n = [cos_psi, sin_psi];
        let t = [-sin_psi, cos_psi];
        let q = [s.center[0] + s.radius * n[0], s.center[1] + s.radius * n[1]];
        let (sin_phi, cos_phi) = p.phi.sin_cos();
        let v = [cos_phi * n[0] + sin_phi * t[0], cos_phi * n[1] + sin_phi * t[1]];
        (q, v)
    }

    /// First intersection of the ray from `q` in direction `v` with any
    /// scatterer copy. Returns `(tau, copy)`.
    fn cast_ray(&self, q: [f64; 2], v: [f64; 2]) -> Result<(f64, DiskCopy), CollisionError> {
        if let Some(hit) = Self::scan(&self.copies, q, v) {
            return Ok(hit);
        }
        // widen the window for long corridors (infinite-horizon tables)
        for window in (BASE_WINDOW + 1)..=MAX_WINDOW {
            let copies = Self::make_copies(&self.scatterers, window);
            if let Some(hit) = Self::scan(&copies, q, v) {
                return Ok(hit);
            }
        }
        Err(CollisionError::Horizon)
    }

    fn scan(copies: &[DiskCopy], q: [f64; 2], v: [f64; 2]) -> Option<(f64, DiskCopy)> {
        let mut best: Option<(f64, DiskCopy)> = None;
        for c in copies {
            let dx = q[0] - c.center[0];
            let dy = q[1] - c.center[1];
            let b = dx * v[0] + dy * v[1];
            let q_c = dx * dx + dy * dy - c.radius * c.radius;
            let disc = b * b - q_c;
            if disc <= 0.0 {
                continue;
            }
            let sq = disc.sqrt();
            // stable smallest positive root of t^2 + 2bt + q_c = 0
            let tau = if b <= 0.0 { -b - sq } else { -q_c / (b + sq) };
            if tau > MIN_TAU && tau < best.map_or(f64::INFINITY, |(t, _)| t) {
                best = Some((tau, *c));
            }
        }
        best
    }

    /// One application of the collision map with its tangent matrix.
    pub fn next_collision(&self, p: &PhasePoint) -> Result<CollisionResult, CollisionError> {
        let cos_phi = p.phi.cos();
        if cos_phi < self.grazing_guard {
            return Err(CollisionError::Grazing { margin: cos_phi });
        }
        let (q, v) = self.phase_to_ray(p);
        let (tau, copy) = self.cast_ray(q, v)?;
        let hit = [q[0] + tau * v[0], q[1] + tau * v[1]];
        let rel = [hit[0] - copy.center[0], hit[1] - copy.center[1]];
        let inv_r = 1.0 / copy.radius;
        let n1 = [rel[0] * inv_r, rel[1] * inv_r];
        let t1 = [-n1[1], n1[0]];
        // elastic reflection
        let vn = v[0] * n1[0] + v[1] * n1[1];
        let vr = [v[0] - 2.0 * vn * n1[0], v[1] - 2.0 * vn * n1[1]];
        let cos_phi1 = vr[0] * n1[0] + vr[1] * n1[1];
        let sin_phi1 = vr[0] * t1[0] + vr[1] * t1[1];
        if cos_phi1 < self.grazing_guard {
            return Err(CollisionError::Grazing { margin: cos_phi1 });
        }
        let phi1 = sin_phi1.atan2(cos_phi1);
        let mut psi1 = rel[1].atan2(rel[0]);
        if psi1 < 0.0 {
            psi1 += 2.0 * std::f64::consts::PI;
        }
        let next = PhasePoint { scatterer: copy.id, r: copy.radius * psi1, phi: phi1 };

        let k0 = 1.0 / self.scatterers[p.scatterer].radius;
        let k1 = inv_r;
        let f = -1.0 / cos_phi1;
        let d_map = Mat2([
            [f * (tau * k0 + cos_phi), f * tau],
            [
                f * (tau * k0 * k1 + k0 * cos_phi1 + k1 * cos_phi),
                f * (tau * k1 + cos_phi1),
            ],
        ]);
        let base = self.scatterers[copy.id].center;
        let offset = [
            ((copy.center[0] - base[0]).round() as i32).clamp(-2, 2) as i8,
            ((copy.center[1] - base[1]).round() as i32).clamp(-2, 2) as i8,
        ];
        Ok(CollisionResult { next, tau, d_map, grazing_margin: cos_phi.min(cos_phi1), offset })
    }

    /// Central finite-difference Jacobian of `(r, phi) -> (r1, phi1)`,
    /// the independent oracle for [`CollisionResult::d_map`].
    ///
    /// The truncation error grows like `h^2 / margin^5` toward
    /// tangential collisions, so the oracle refuses points whose grazing
    /// margin falls below `(1e9 h^2)^(1/5)` (about 0.1 at `h = 1e-7`),
    /// keeping its own error under 1e-6 wherever it answers.
    pub fn tangent_map_fd(&self, p: &PhasePoint, h: f64) -> Result<Mat2, FdError> {
        let base = self.next_collision(p)?;
        let guard = (1e9 * h * h).powf(0.2);
        if base.grazing_margin < guard {
            return Err(FdError::NearSingular { margin: base.grazing_margin, guard });
        }
        let eval = |dr: f64, dphi: f64| -> Result<PhasePoint, FdError> {
            let q = PhasePoint { scatterer: p.scatterer, r: p.r + dr, phi: p.phi + dphi };
            let res = self.next_collision(&q)?;
            // perturbed flights must take the same continuity branch
            if res.next.scatterer != base.next.scatterer || res.offset != base.offset {
                return Err(FdError::SingularityStraddle);
            }
            let circ = self.scatterers[res.next.scatterer].circumference();
            if wrapped_diff(res.next.r, base.next.r, circ).abs() > 0.25 * circ {
                return Err(FdError::SingularityStraddle);
            }
            Ok(res.next)
        };
        let rp = eval(h, 0.0)?;
        let rm = eval(-h, 0.0)?;
        let pp = eval(0.0, h)?;
        let pm = eval(0.0, -h)?;
        let circ = self.scatterers[base.next.scatterer].circumference();
        Ok(Mat2([
            [
                wrapped_diff(rp.r, rm.r, circ) / (2.0 * h),
                wrapped_diff(pp.r, pm.r, circ) / (2.0 * h),
            ],
            [(rp.phi - rm.phi) / (2.0 * h), (pp.phi - pm.phi) / (2.0 * h)],
        ]))
    }

    /// Iterate the collision map `n` times. Grazing collisions truncate
    /// the orbit (recorded, never a crash).
    pub fn orbit(&self, p0: &PhasePoint, n: usize) -> OrbitResult {
        let mut points = Vec::with_capacity(n + 1);
        let mut itinerary = Vec::with_capacity(n + 1);
        let mut offsets = Vec::with_capacity(n);
        points.push(*p0);
        itinerary.push(p0.scatterer);
        let mut min_margin = f64::INFINITY;
        let mut truncated_at = None;
        let mut cur = *p0;
        for step in 0..n {
            match self.next_collision(&cur) {
                Ok(res) => {
                    min_margin = min_margin.min(res.grazing_margin);
                    cur = res.next;
                    points.push(cur);
                    itinerary.push(cur.scatterer);
                    offsets.push(res.offset);
                }
                Err(_) => {
                    truncated_at = Some(step);
                    break;
                }
            }
        }
        OrbitResult { points, itinerary, offsets, min_grazing_margin: min_margin, truncated_at }
    }

    /// Per-step log expansion factors along the unstable direction.
    ///
    /// A tangent vector with positive slope is pushed through the orbit
    /// for `warmup` collisions (forward cone iteration), after which the
    /// Euclidean growth factor of each further step is recorded; `n`
    /// entries are returned. Their sum telescopes to the log of the total
    /// expansion of the warmed-up vector.
    pub fn unstable_log_expansion(
        &self,
        p0: &PhasePoint,
        n: usize,
        warmup: usize,
    ) -> Result<Vec<f64>, TruncatedOrbit> {
        let mut cur = *p0;
        let mut v = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2];
        let mut out = Vec::with_capacity(n);
        for step in 0..warmup + n {
            let res = self.next_collision(&cur).map_err(|_| TruncatedOrbit { at_step: step })?;
            let w = res.d_map.apply(v);
            let norm = (w[0] * w[0] + w[1] * w[1]).sqrt();
            if step >= warmup {
                out.push(norm.ln());
            }
            v = [w[0] / norm, w[1] / norm];
            cur = res.next;
        }
        Ok(out)
    }

    /// Unstable direction at `p` itself, via time reversal.
    ///
    /// The past orbit of `p` is the image under the involution of the
    /// forward orbit of `I(p)`; pushing a cone vector from `T^{-w} p`
    /// back to `p` converges onto the unstable direction evaluated at the
    /// node, which makes pointwise quadrature of the log unstable
    /// Jacobian possible. `warmup` around 8 balances cone convergence
    /// against round-off amplification along the retraced segment.
    pub fn unstable_direction_at(
        &self,
        p: &PhasePoint,
        warmup: usize,
    ) -> Result<[f64; 2], TruncatedOrbit> {
        let back = self.orbit(&self.involution(p), warmup);
        if let Some(step) = back.truncated_at {
            return Err(TruncatedOrbit { at_step: step });
        }
        let start = self.involution(&back.points[warmup]);
        let mut cur = start;
        let mut v = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2];
        for step in 0..warmup {
            let res = self.next_collision(&cur).map_err(|_| TruncatedOrbit { at_step: step })?;
            let w = res.d_map.apply(v);
            let norm = (w[0] * w[0] + w[1] * w[1]).sqrt();
            v = [w[0] / norm, w[1] / norm];
            cur = res.next;
        }
        Ok(v)
    }

    /// One-step log expansion at `p` along [`Self::unstable_direction_at`].
    pub fn log_unstable_jacobian_at(
        &self,
        p: &PhasePoint,
        warmup: usize,
    ) -> Result<f64, TruncatedOrbit> {
        let v = self.unstable_direction_at(p, warmup)?;
        let res = self.next_collision(p).map_err(|_| TruncatedOrbit { at_step: 0 })?;
        let w = res.d_map.apply(v);
        Ok(((w[0] * w[0] + w[1] * w[1]).sqrt()).ln())
    }

    /// Minimum free flight over randomly sampled rays; the sampling
    /// oracle for the exact [`Self::tau_min`]. Rays escaping the search
    /// horizon (infinite-horizon tables) are skipped.
    pub fn tau_min_raycast(&self, n_rays: usize, rng: &mut impl rand::Rng) -> f64 {
        let mut best = f64::INFINITY;
        for _ in 0..n_rays {
            let sid = rng.gen_range(0..self.scatterers.len());
            let r = rng.gen_range(0.0..self.scatterers[sid].circumference());
            let phi = rng.gen_range(-std::f64::consts::FRAC_PI_2..std::f64::consts::FRAC_PI_2);
            let p = PhasePoint { scatterer: sid, r, phi };
            let (q, v) = self.phase_to_ray(&p);
            if let Ok((tau, _)) = self.cast_ray(q, v) {
                best = best.min(tau);
            }
        }
        best
    }
}

/// Signed difference `a - b` unwrapped to `(-circ/2, circ/2]`.
fn wrapped_diff(a: f64, b: f64, circ: f64) -> f64 {
    let mut d = a - b;
    while d > 0.5 * circ {
        d -= circ;
    }
    while d <= -0.5 * circ {
        d += circ;
    }
    d
}
