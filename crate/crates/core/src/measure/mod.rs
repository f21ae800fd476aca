//! The SRB measure of the billiard map, quadrature against it, symbolic
//! itineraries, separation times, cylinder partitions and empirical
//! alpha-mixing coefficients.

mod itinerary;
mod mixing;
mod srb;

pub use itinerary::{
    centered_word, conditional_expectation_on_cells, cylinder_partition, separation_time,
    word_is_hyperbolic, Cell, CellFunction, CylinderPartition, MissingCell, SeparationResult,
    Word,
};
pub use mixing::{
    alpha_mixing_estimate, alpha_mixing_profile, MixingError, MixingEstimate, MixingOptions,
};
pub use srb::{QuadratureError, SrbMeasure, NEG_LOG_COS_MEAN};
