//! Run configuration: a TOML document describing the scenario, solver
//! settings, grid steps, and sweep axes. dB/dBm fields are converted to
//! linear units once here; the rest of the crate only sees linear values.

use crate::channel::{db_to_linear, dbm_to_watts, BaseStation, LinkBudget};
use crate::geometry::{CameraIntrinsics, GroundTarget};
use crate::problem::Scenario;
use crate::solver::SolverConfig;
use serde::Deserialize;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse config file: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    bs: RawBs,
    gt: RawGt,
    camera: RawCamera,
    link: RawLink,
    alpha: f64,
    i_min: f64,
    solver: Option<RawSolver>,
    es: Option<RawEs>,
    sweep: Option<RawSweep>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBs {
    x: f64,
    y: f64,
    z: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGt {
    x: f64,
    y: f64,
    r0: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCamera {
    f0: f64,
    w0: f64,
    l0: f64,
    delta0: f64,
    bits_per_pixel: Option<u32>,
    /// Image size as `2^n` pixel levels instead of `n` bits per pixel.
    legacy_size_formula: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLink {
    bandwidth_hz: Option<f64>,
    gamma0: Option<f64>,
    p_dbm: Option<f64>,
    sigma2_dbm: Option<f64>,
    gamma_db: Option<f64>,
    beta0_db: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    precision: Option<f64>,
    max_iters: Option<usize>,
    bisect_tol: Option<f64>,
    feasibility_tol: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEs {
    step_m: Option<f64>,
    /// Coarser step for the 3D validation search.
    step3d_m: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    gamma0: Option<Vec<f64>>,
    i_min: Option<Vec<f64>>,
    i_min_distance: Option<Vec<f64>>,
    d_gb: Option<Vec<f64>>,
}

/// Axes for the sweep commands.
#[derive(Debug, Clone)]
pub struct SweepAxes {
    /// Reference-SNR values for the resolution sweep.
    pub gamma0: Vec<f64>,
    /// Resolution-requirement axis for the resolution sweep.
    pub i_min: Vec<f64>,
    /// Resolution levels held fixed in the distance sweep.
    pub i_min_distance: Vec<f64>,
    /// BS-target distances for the distance sweep (m).
    pub d_gb: Vec<f64>,
}

impl Default for SweepAxes {
    fn default() -> Self {
        Self {
            gamma0: vec![1e6, 1e7, 1e8],
            i_min: (1..=8).map(|i| i as f64 * 0.05).collect(),
            i_min_distance: vec![0.1, 0.2, 0.3],
            d_gb: (1..=10).map(|i| i as f64 * 50.0).collect(),
        }
    }
}

/// Fully resolved configuration for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub solver: SolverConfig,
    /// Grid step for the 2D exhaustive search (m).
    pub es_step: f64,
    /// Grid step for the 3D validation search (m).
    pub es_step_3d: f64,
    pub sweep: SweepAxes,
}

/// Loads and fully resolves a config file. Unknown keys are rejected.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)?;
    let raw: RawConfig = toml::from_str(&text)?;
    resolve(raw)
}

fn resolve(raw: RawConfig) -> Result<RunConfig, ConfigError> {
    let bandwidth = raw.link.bandwidth_hz.unwrap_or(1e6);
    let components = [
        ("link.p_dbm", raw.link.p_dbm),
        ("link.sigma2_dbm", raw.link.sigma2_dbm),
        ("link.gamma_db", raw.link.gamma_db),
        ("link.beta0_db", raw.link.beta0_db),
    ];
    let n_given = components.iter().filter(|(_, v)| v.is_some()).count();
    let gamma0_components = if n_given == 4 {
        Some(
            dbm_to_watts(raw.link.p_dbm.unwrap()) * db_to_linear(raw.link.beta0_db.unwrap())
                / (dbm_to_watts(raw.link.sigma2_dbm.unwrap()) * db_to_linear(raw.link.gamma_db.unwrap())),
        )
    } else if n_given == 0 {
        None
    } else {
        let missing: Vec<_> = components
            .iter()
            .filter(|(_, v)| v.is_none())
            .map(|(k, _)| *k)
            .collect();
        return Err(ConfigError::Invalid(format!(
            "link components incomplete; missing {}",
            missing.join(", ")
        )));
    };
    let gamma0 = match (raw.link.gamma0, gamma0_components) {
        (Some(direct), Some(derived)) => {
            if (direct - derived).abs() > 1e-9 * derived.abs() {
                return Err(ConfigError::Invalid(format!(
                    "link.gamma0 = {direct} disagrees with the value {derived} derived from the dB components; remove one"
                )));
            }
            direct
        }
        (Some(direct), None) => direct,
        (None, Some(derived)) => derived,
        (None, None) => {
            return Err(ConfigError::Invalid(
                "link.gamma0 or the four dB components (p_dbm, sigma2_dbm, gamma_db, beta0_db) required".into(),
            ))
        }
    };

    let cam = CameraIntrinsics {
        f0: raw.camera.f0,
        w0: raw.camera.w0,
        l0: raw.camera.l0,
        delta0: raw.camera.delta0,
        bits_per_pixel: raw.camera.bits_per_pixel.unwrap_or(24),
    };
    let scenario = Scenario::new(
        BaseStation { w_b: [raw.bs.x, raw.bs.y], z_b: raw.bs.z },
        GroundTarget { w_g: [raw.gt.x, raw.gt.y], r0: raw.gt.r0 },
        cam,
        LinkBudget { bandwidth, gamma0 },
        raw.i_min,
        raw.alpha,
    )
    .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let scenario = if raw.camera.legacy_size_formula.unwrap_or(false) {
        scenario.with_pixel_level_image_size()
    } else {
        scenario
    };

    let defaults = SolverConfig::default();
    let solver = match &raw.solver {
        Some(s) => SolverConfig {
            precision: s.precision.unwrap_or(defaults.precision),
            max_iters: s.max_iters.unwrap_or(defaults.max_iters),
            bisect_tol: s.bisect_tol.unwrap_or(defaults.bisect_tol),
            feasibility_tol: s.feasibility_tol.unwrap_or(defaults.feasibility_tol),
        },
        None => defaults,
    };
    if !(solver.precision > 0.0) || solver.max_iters == 0 || !(solver.bisect_tol > 0.0) {
        return Err(ConfigError::Invalid(
            "solver.precision, solver.bisect_tol must be positive and solver.max_iters >= 1".into(),
        ));
    }

    let es_step = raw.es.as_ref().and_then(|e| e.step_m).unwrap_or(1.0);
    let es_step_3d = raw.es.as_ref().and_then(|e| e.step3d_m).unwrap_or(5.0);
    if !(es_step > 0.0) || !(es_step_3d > 0.0) {
        return Err(ConfigError::Invalid("es.step_m and es.step3d_m must be positive".into()));
    }

    let ax_defaults = SweepAxes::default();
    let sweep = match &raw.sweep {
        Some(s) => {
            for (key, list) in [
                ("sweep.gamma0", &s.gamma0),
                ("sweep.i_min", &s.i_min),
                ("sweep.i_min_distance", &s.i_min_distance),
                ("sweep.d_gb", &s.d_gb),
            ] {
                if let Some(l) = list {
                    if l.is_empty() {
                        return Err(ConfigError::Invalid(format!("{key} must be non-empty")));
                    }
                }
            }
            SweepAxes {
                gamma0: s.gamma0.clone().unwrap_or(ax_defaults.gamma0),
                i_min: s.i_min.clone().unwrap_or(ax_defaults.i_min),
                i_min_distance: s.i_min_distance.clone().unwrap_or(ax_defaults.i_min_distance),
                d_gb: s.d_gb.clone().unwrap_or(ax_defaults.d_gb),
            }
        }
        None => ax_defaults,
    };

    Ok(RunConfig { scenario, solver, es_step, es_step_3d, sweep })
}

/// Parses a config from a TOML string (used by tests and docs).
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text)?;
    resolve(raw)
}
