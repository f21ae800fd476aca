//! Hyperbolic toral automorphism `(x, y) -> (2x + y, x + y) mod 1`.

use super::mat2::Mat2;

/// Point on the unit torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatMapState {
    pub x: f64,
    pub y: f64,
}

impl CatMapState {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x: x.rem_euclid(1.0), y: y.rem_euclid(1.0) }
    }
}

/// Per-step log expansion along the unstable eigendirection:
/// `log((3 + sqrt 5) / 2)`.
pub const CAT_LOG_EXPANSION: f64 = 0.962_423_650_119_206_9;

/// Unstable eigendirection `(1, (sqrt 5 - 1)/2)` of the tangent map.
pub const CAT_UNSTABLE_DIR: [f64; 2] = [1.0, 0.618_033_988_749_894_9];

/// One step of the automorphism.
pub fn cat_step(s: CatMapState) -> CatMapState {
    CatMapState { x: (2.0 * s.x + s.y).rem_euclid(1.0), y: (s.x + s.y).rem_euclid(1.0) }
}

/// Constant tangent map `[[2, 1], [1, 1]]`.
pub fn cat_tangent_map() -> Mat2 {
    Mat2([[2.0, 1.0], [1.0, 1.0]])
}
