//! Observable specifications and their evaluation on both systems.

use crate::dynamics::{BilliardTable, CatMapState, PhasePoint, TruncatedOrbit};
use crate::measure::NEG_LOG_COS_MEAN;
use crate::observables::ShrinkingTargetFamily;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("TrigBoundary frequency must be a positive integer")]
    ZeroFrequency,
    #[error("Coboundary base must be a pointwise observable (NegLogCosPhi, TrigBoundary or CatCharacter)")]
    BadCoboundaryBase,
    #[error("target index {index} exceeds the family horizon {n_max}")]
    TargetIndex { index: usize, n_max: usize },
    #[error("centering requested but no analytic mean is known; supply one explicitly")]
    NoAnalyticMean,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("orbit needed by the observable was truncated: {0}")]
    Truncated(#[from] TruncatedOrbit),
    #[error("observable is not defined on this system")]
    WrongSystem,
}

/// Evaluation rule of an observable.
#[derive(Debug, Clone)]
pub enum ObservableSpec {
    /// `-log cos phi`; unbounded near the singularities, mean `1 - ln 2`.
    NegLogCosPhi,
    /// `cos(2 pi k r / |scatterer|)`, the k-th harmonic of the arc
    /// coordinate on each scatterer; smooth on the whole boundary and of
    /// exact mean 0. (A single harmonic of the global arc position would
    /// jump at each scatterer's arc origin, a discontinuity no dynamical
    /// partition can resolve.)
    TrigBoundary { frequency: u32 },
    /// One-step log expansion along the unstable direction.
    LogUnstableJacobian { warmup: usize },
    /// Indicator of the `index`-th target band.
    TargetIndicator { family: ShrinkingTargetFamily, index: usize },
    /// `g - g o T` for a pointwise base `g`.
    Coboundary { base: Box<ObservableSpec> },
    /// `cos(2 pi (k1 x + k2 y))` on the torus; mean 0 unless `k = 0`.
    CatCharacter { k: [i64; 2] },
}

/// An observable plus centering metadata.
#[derive(Debug, Clone)]
pub struct Observable {
    pub spec: ObservableSpec,
    pub centered: bool,
    center_value: f64,
}

impl Observable {
    /// Uncentered observable; validates parameters.
    pub fn new(spec: ObservableSpec) -> Result<Self, SpecError> {
        validate(&spec)?;
        Ok(Self { spec, centered: false, center_value: 0.0 })
    }

    /// Centered observable using the analytic mean.
    pub fn centered(spec: ObservableSpec) -> Result<Self, SpecError> {
        validate(&spec)?;
        let mean = analytic_mean(&spec).ok_or(SpecError::NoAnalyticMean)?;
        Ok(Self { spec, centered: true, center_value: mean })
    }

    /// Centered observable with an externally computed mean (for
    /// observables without a closed-form mean).
    pub fn centered_with_mean(spec: ObservableSpec, mean: f64) -> Result<Self, SpecError> {
        validate(&spec)?;
        Ok(Self { spec, centered: true, center_value: mean })
    }

    pub fn analytic_mean(&self) -> Option<f64> {
        analytic_mean(&self.spec)
    }

    pub fn center_value(&self) -> f64 {
        self.center_value
    }

    /// Pointwise evaluation on the billiard.
    ///
    /// `LogUnstableJacobian` is evaluated at the point itself via the
    /// time-reversed warmup, so quadrature nodes see a function of the
    /// node; series generation along orbits uses the forward warmup
    /// instead (both converge onto the same unstable direction).
    pub fn eval_billiard(&self, table: &BilliardTable, p: &PhasePoint) -> Result<f64, EvalError> {
        let raw = eval_raw_billiard(&self.spec, table, p)?;
        Ok(if self.centered { raw - self.center_value } else { raw })
    }

    /// Pointwise evaluation on the cat map.
    pub fn eval_cat(&self, s: &CatMapState) -> Result<f64, EvalError> {
        let raw = eval_raw_cat(&self.spec, s)?;
        Ok(if self.centered { raw - self.center_value } else { raw })
    }
}

fn validate(spec: &ObservableSpec) -> Result<(), SpecError> {
    match spec {
        ObservableSpec::TrigBoundary { frequency: 0 } => Err(SpecError::ZeroFrequency),
        ObservableSpec::TargetIndicator { family, index } => {
            if *index >= family.n_max() {
                Err(SpecError::TargetIndex { index: *index, n_max: family.n_max() })
            } else {
                Ok(())
            }
        }
        ObservableSpec::Coboundary { base } => match **base {
            ObservableSpec::NegLogCosPhi
            | ObservableSpec::TrigBoundary { .. }
            | ObservableSpec::CatCharacter { .. } => validate(base),
            _ => Err(SpecError::BadCoboundaryBase),
        },
        _ => Ok(()),
    }
}

fn analytic_mean(spec: &ObservableSpec) -> Option<f64> {
    match spec {
        ObservableSpec::NegLogCosPhi => Some(NEG_LOG_COS_MEAN),
        ObservableSpec::TrigBoundary { .. } => Some(0.0),
        ObservableSpec::LogUnstableJacobian { .. } => None,
        ObservableSpec::TargetIndicator { family, index } => Some(family.mass(*index)),
        ObservableSpec::Coboundary { .. } => Some(0.0),
        ObservableSpec::CatCharacter { k } => {
            if k[0] == 0 && k[1] == 0 {
                Some(1.0)
            } else {
                Some(0.0)
            }
        }
    }
}

fn eval_raw_billiard(
    spec: &ObservableSpec,
    table: &BilliardTable,
    p: &PhasePoint,
) -> Result<f64, EvalError> {
    match spec {
        ObservableSpec::NegLogCosPhi => Ok(-p.phi.cos().ln()),
        ObservableSpec::TrigBoundary { frequency } => {
            let circ = table.scatterers()[p.scatterer].circumference();
            Ok((2.0 * std::f64::consts::PI * *frequency as f64 * p.r / circ).cos())
        }
        ObservableSpec::LogUnstableJacobian { warmup } => {
            Ok(table.log_unstable_jacobian_at(p, *warmup)?)
        }
        ObservableSpec::TargetIndicator { family, index } => {
            Ok(if family.contains(*index, p) { 1.0 } else { 0.0 })
        }
        ObservableSpec::Coboundary { base } => {
            let here = eval_raw_billiard(base, table, p)?;
            let next = table
                .next_collision(p)
                .map_err(|_| EvalError::Truncated(TruncatedOrbit { at_step: 0 }))?;
            let there = eval_raw_billiard(base, table, &next.next)?;
            Ok(here - there)
        }
        ObservableSpec::CatCharacter { .. } => Err(EvalError::WrongSystem),
    }
}

fn eval_raw_cat(spec: &ObservableSpec, s: &CatMapState) -> Result<f64, EvalError> {
    match spec {
        ObservableSpec::CatCharacter { k } => {
            Ok((2.0 * std::f64::consts::PI * (k[0] as f64 * s.x + k[1] as f64 * s.y)).cos())
        }
        ObservableSpec::Coboundary { base } => {
            let here = eval_raw_cat(base, s)?;
            let there = eval_raw_cat(base, &crate::dynamics::cat_step(*s))?;
            Ok(here - there)
        }
        _ => Err(EvalError::WrongSystem),
    }
}

/// One-step log expansion at the final point of a forward warmup orbit,
/// the orbit-based route to the log unstable Jacobian.
pub fn log_unstable_jacobian(
    table: &BilliardTable,
    x: &PhasePoint,
    warmup: usize,
) -> Result<f64, TruncatedOrbit> {
    Ok(table.unstable_log_expansion(x, 1, warmup)?[0])
}
