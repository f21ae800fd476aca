//! Exact geometry and differentiable structure of the two reference
//! systems: the dispersing billiard collision map on the unit torus and
//! the hyperbolic toral automorphism.

mod billiard;
mod catmap;
mod mat2;

pub use billiard::{
    BilliardTable, CollisionError, CollisionResult, FdError, OrbitResult, PhasePoint, Scatterer,
    TableError, TruncatedOrbit, DEFAULT_GRAZING_GUARD,
};
pub use catmap::{cat_step, cat_tangent_map, CatMapState, CAT_LOG_EXPANSION, CAT_UNSTABLE_DIR};
pub use mat2::Mat2;
