//! Experiment configuration: a human-editable TOML file (JSON accepted
//! as an alternative), validated into the core types.

use asiplab_core::dynamics::BilliardTable;
use asiplab_core::observables::{Observable, ObservableSpec, ShrinkingTargetFamily};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("config parse error in {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid config field `{field}`: {message}")]
    Field { field: String, message: String },
}

fn default_one() -> u32 {
    1
}
fn default_warmup() -> usize {
    50
}
fn default_char_k() -> [i64; 2] {
    [1, 0]
}

/// Declarative observable entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservableConfig {
    NegLogCosPhi,
    TrigBoundary {
        #[serde(default = "default_one")]
        frequency: u32,
    },
    LogUnstableJacobian {
        #[serde(default = "default_warmup")]
        warmup: usize,
    },
    CatCharacter {
        #[serde(default = "default_char_k")]
        k: [i64; 2],
    },
    Coboundary {
        base: Box<ObservableConfig>,
    },
}

impl ObservableConfig {
    pub fn to_spec(&self) -> ObservableSpec {
        match self {
            ObservableConfig::NegLogCosPhi => ObservableSpec::NegLogCosPhi,
            ObservableConfig::TrigBoundary { frequency } => {
                ObservableSpec::TrigBoundary { frequency: *frequency }
            }
            ObservableConfig::LogUnstableJacobian { warmup } => {
                ObservableSpec::LogUnstableJacobian { warmup: *warmup }
            }
            ObservableConfig::CatCharacter { k } => ObservableSpec::CatCharacter { k: *k },
            ObservableConfig::Coboundary { base } => {
                ObservableSpec::Coboundary { base: Box::new(base.to_spec()) }
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScattererConfig {
    pub center: [f64; 2],
    pub radius: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// "billiard" or "catmap".
    pub kind: String,
    /// Scatterer list; omitted means the canonical three-disk table.
    #[serde(default)]
    pub scatterers: Vec<ScattererConfig>,
    #[serde(default = "SystemConfig::default_clearance")]
    pub clearance: f64,
}

impl SystemConfig {
    fn default_clearance() -> f64 {
        0.02
    }
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self { kind: "billiard".into(), scatterers: Vec::new(), clearance: 0.02 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// "stationary", "targets" or "modulated".
    #[serde(default = "RunConfig::default_mode")]
    pub mode: String,
    pub n_max: usize,
    #[serde(default = "RunConfig::default_ensemble")]
    pub ensemble: usize,
    #[serde(default = "RunConfig::default_seed")]
    pub master_seed: u64,
}

impl RunConfig {
    fn default_mode() -> String {
        "stationary".into()
    }
    fn default_ensemble() -> usize {
        2000
    }
    fn default_seed() -> u64 {
        42
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetsConfig {
    pub gamma: f64,
    pub c: f64,
    #[serde(default = "TargetsConfig::default_mu0")]
    pub mu0: f64,
}

impl TargetsConfig {
    fn default_mu0() -> f64 {
        0.5
    }
}

impl Default for TargetsConfig {
    fn default() -> Self {
        Self { gamma: 0.5, c: 0.1, mu0: 0.5 }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "GridConfig::default_points")]
    pub points: usize,
    #[serde(default = "GridConfig::default_min")]
    pub min: usize,
}

impl GridConfig {
    fn default_points() -> usize {
        25
    }
    fn default_min() -> usize {
        10
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { points: 25, min: 10 }
    }
}

/// Gate thresholds; defaults mirror the statistical battery.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TestsConfig {
    pub clt_n: usize,
    pub clt_ks_max: f64,
    pub gk_lag: usize,
    pub gk_orbit_len: usize,
    pub gk_sigma2_expect: Option<f64>,
    pub gk_sigma2_tol: f64,
    pub asclt_n_max: usize,
    pub lil_n_max: usize,
    pub kappa2_lo: f64,
    pub kappa2_hi: f64,
    pub gk_cross_check_rel: f64,
    pub asclt_ks_max: f64,
    pub lil_lo: f64,
    pub lil_hi: f64,
    pub target_ks_max: f64,
    pub target_slope_lo: f64,
    pub target_slope_hi: f64,
    pub mixing_depth: usize,
    pub mixing_gap_max: usize,
    pub mixing_seeds: usize,
    pub mixing_orbit_len: usize,
}

impl Default for TestsConfig {
    fn default() -> Self {
        Self {
            clt_n: 10_000,
            clt_ks_max: 0.05,
            gk_lag: 20,
            gk_orbit_len: 2_000_000,
            gk_sigma2_expect: None,
            gk_sigma2_tol: 0.02,
            asclt_n_max: 1_000_000,
            lil_n_max: 1_000_000,
            kappa2_lo: 0.45,
            kappa2_hi: 0.55,
            gk_cross_check_rel: 0.10,
            asclt_ks_max: 0.1,
            lil_lo: 0.5,
            lil_hi: 1.3,
            target_ks_max: 0.05,
            target_slope_lo: 0.4,
            target_slope_hi: 0.6,
            mixing_depth: 1,
            mixing_gap_max: 12,
            mixing_seeds: 5,
            mixing_orbit_len: 300_000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub system: SystemConfig,
    pub observable: Option<ObservableConfig>,
    #[serde(default = "ExperimentConfig::default_centered")]
    pub centered: bool,
    pub run: Option<RunConfig>,
    pub targets: Option<TargetsConfig>,
    /// Exponent of the modulated mode `f_n = (n+1)^e f`.
    pub modulated_exponent: Option<f64>,
    pub grid: GridConfig,
    pub tests: TestsConfig,
    /// Output directory; overridden by `--out`.
    pub out_dir: Option<String>,
    /// Worker threads; 0 means all cores. Overridden by `--workers` or
    /// `ASIPLAB_WORKERS`.
    #[serde(default)]
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            system: SystemConfig::default(),
            observable: None,
            centered: true,
            run: None,
            targets: None,
            modulated_exponent: None,
            grid: GridConfig::default(),
            tests: TestsConfig::default(),
            out_dir: None,
            workers: 0,
        }
    }
}

impl ExperimentConfig {
    fn default_centered() -> bool {
        true
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let parsed: Self = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| ConfigError::Parse {
                path: path.display().to_string(),
                message: e.to_string(),
            })?
        } else {
            toml::from_str(&text).map_err(|e| ConfigError::Parse {
                path: path.display().to_string(),
                message: e.to_string(),
            })?
        };
        parsed.validate()?;
        Ok(parsed)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        match self.system.kind.as_str() {
            "billiard" | "catmap" => {}
            other => {
                return Err(ConfigError::Field {
                    field: "system.kind".into(),
                    message: format!("unknown system `{other}` (billiard | catmap)"),
                })
            }
        }
        if let Some(run) = &self.run {
            if run.n_max == 0 {
                return Err(ConfigError::Field {
                    field: "run.n_max".into(),
                    message: "must be positive".into(),
                });
            }
            if run.ensemble == 0 {
                return Err(ConfigError::Field {
                    field: "run.ensemble".into(),
                    message: "must be positive".into(),
                });
            }
            match run.mode.as_str() {
                "stationary" | "targets" | "modulated" => {}
                other => {
                    return Err(ConfigError::Field {
                        field: "run.mode".into(),
                        message: format!(
                            "unknown mode `{other}` (stationary | targets | modulated)"
                        ),
                    })
                }
            }
        }
        if let Some(t) = &self.targets {
            if !(t.gamma > 0.0 && t.gamma < 0.75) {
                return Err(ConfigError::Field {
                    field: "targets.gamma".into(),
                    message: format!(
                        "gamma = {} outside the admissible range gamma in (0, 3/4)",
                        t.gamma
                    ),
                });
            }
            if !(t.c > 0.0) {
                return Err(ConfigError::Field {
                    field: "targets.c".into(),
                    message: "scale must be positive".into(),
                });
            }
            if !(t.mu0 > 0.0 && t.mu0 <= 0.5) {
                return Err(ConfigError::Field {
                    field: "targets.mu0".into(),
                    message: "mass cap must lie in (0, 1/2]".into(),
                });
            }
        }
        Ok(())
    }

    /// Build the billiard table (canonical when no scatterers given).
    pub fn build_table(&self) -> Result<BilliardTable, ConfigError> {
        if self.system.scatterers.is_empty() {
            return Ok(BilliardTable::canonical_three_disk());
        }
        let spec: Vec<([f64; 2], f64)> =
            self.system.scatterers.iter().map(|s| (s.center, s.radius)).collect();
        BilliardTable::build(&spec, self.system.clearance).map_err(|e| ConfigError::Field {
            field: "system.scatterers".into(),
            message: e.to_string(),
        })
    }

    pub fn build_observable(&self) -> Result<Observable, ConfigError> {
        let spec = self
            .observable
            .as_ref()
            .map(|o| o.to_spec())
            .unwrap_or(default_observable_spec(&self.system.kind));
        let built = if self.centered {
            match Observable::centered(spec.clone()) {
                Ok(o) => Ok(o),
                // no analytic mean (log unstable Jacobian): run uncentered,
                // pipelines center empirically where required
                Err(_) => Observable::new(spec),
            }
        } else {
            Observable::new(spec)
        };
        built.map_err(|e| ConfigError::Field { field: "observable".into(), message: e.to_string() })
    }

    pub fn build_family(&self, n_max: usize) -> Result<ShrinkingTargetFamily, ConfigError> {
        let t = self.targets.unwrap_or_default();
        ShrinkingTargetFamily::new(t.gamma, t.c, t.mu0, n_max).map_err(|e| ConfigError::Field {
            field: "targets".into(),
            message: e.to_string(),
        })
    }

    /// Canonical serialized form (JSON) used for the config hash.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Geometric grid of checkpoint indices in `[grid.min, n_max]`.
    pub fn geometric_grid(&self, n_max: usize) -> Vec<usize> {
        let lo = self.grid.min.max(1).min(n_max);
        let points = self.grid.points.max(2);
        let ratio = (n_max as f64 / lo as f64).powf(1.0 / (points as f64 - 1.0));
        let mut grid: Vec<usize> = (0..points)
            .map(|i| ((lo as f64) * ratio.powi(i as i32)).round() as usize)
            .collect();
        grid.push(n_max);
        grid.sort_unstable();
        grid.dedup();
        grid.retain(|&n| n >= 1 && n <= n_max);
        grid
    }
}

fn default_observable_spec(system: &str) -> ObservableSpec {
    match system {
        "catmap" => ObservableSpec::CatCharacter { k: [1, 0] },
        _ => ObservableSpec::NegLogCosPhi,
    }
}
