//! Ensemble simulation of processes `X_n = f_n o T^n` and the
//! statistical battery for the testable limit laws: variance growth,
//! Green-Kubo variance, moment scalings, CLT/WIP, ASCLT, LIL,
//! shrinking-target statistics, and the block/epsilon machinery.

mod asclt;
mod blocks;
mod ensemble;
mod greenkubo;
mod targets_report;

pub use asclt::{asclt_ks, lil_running_stat, AscltOptions, LilResult};
pub use blocks::{
    block_approximation_diagnostic, block_schedule, ceil_pow, epsilon_budget, BlockDecay,
    BlockSchedule, EpsilonBudget, HypothesisError,
};
pub use ensemble::{
    clt_ks, moment_checkpoints, moment_scaling_fit, simulate_process, simulate_series,
    variance_curve, wip_covariance_check, EnsembleError, MomentScaling, ObservableSeq,
    ProcessSpec, SeriesEnsemble, VarianceCurve, WipPoint,
};
pub use greenkubo::{green_kubo, GkError, GkEstimate};
pub use targets_report::{shrinking_target_report, TargetReport};
