//! Computational laboratory for two-dimensional hyperbolic systems.
//!
//! The crate simulates the dispersing-billiard collision map on the unit
//! torus and the hyperbolic toral automorphism, samples their invariant
//! measures, and runs the statistical machinery needed to probe moment
//! scalings, mixing rates, Green-Kubo variances, CLT/ASCLT/LIL behavior
//! and shrinking-target hit counts for processes of the form
//! `X_n = f_n o T^n`.
//!
//! Modules map one-to-one onto the subsystems:
//!
//! * [`dynamics`] - exact geometry and tangent maps of both systems;
//! * [`measure`] - the SRB measure, quadrature, itineraries, separation
//!   times, cylinder partitions and empirical alpha-mixing coefficients;
//! * [`observables`] - dynamically Holder observables, shrinking-target
//!   families and hit-count processes;
//! * [`limitlaws`] - ensemble simulation, variance curves, Green-Kubo
//!   estimates, distributional tests and the block/epsilon machinery;
//! * [`stats`] - shared estimators (KS distances, regressions, batch
//!   means);
//! * [`rng`] - the documented master-seed splitting scheme.
//!
//! All operations are pure functions of their inputs plus an explicit RNG
//! stream, so ensembles parallelize without any shared mutable state and
//! results are bit-stable for a fixed master seed regardless of worker
//! count.

pub mod dynamics;
pub mod limitlaws;
pub mod measure;
pub mod observables;
pub mod rng;
pub mod stats;
