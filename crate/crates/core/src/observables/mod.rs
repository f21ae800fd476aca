//! Dynamically Holder observables, shrinking-target families and
//! hit-count processes.

mod seminorm;
mod spec;
mod targets;

pub use seminorm::{sample_separation_pairs, seminorm_growth_probe, ProbeError, SeminormProbe};
pub use spec::{log_unstable_jacobian, EvalError, Observable, ObservableSpec, SpecError};
pub use targets::{hit_count_series, HitCountSeries, ShrinkingTargetFamily, TargetError};
