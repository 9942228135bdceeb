//! Independent validation runs: closed-form footprint quantities against
//! the corner-projection oracle, and the segment-restriction argument
//! against an unrestricted 3D grid search.

use crate::baselines::{self, BaselineError};
use crate::geometry::{self, CameraConstants, GroundTarget, Placement};
use crate::problem::Scenario;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ValidateError {
    #[error("3D search found no feasible placement")]
    Infeasible(#[from] BaselineError),
}

/// Oracle-comparison thresholds (relative error).
pub const ORACLE_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub samples: usize,
    /// Max relative error of the closed-form coverage area vs the oracle.
    pub max_area_err: f64,
    /// Max relative error of the near-edge distance vs the oracle.
    pub max_d1_err: f64,
    /// Max relative error of the lateral-edge distance vs the oracle.
    pub max_d2_err: f64,
    /// Horizontal distance from the 3D-search optimum to the BS-target
    /// segment (m).
    pub segment_distance: f64,
    /// Allowed segment distance: one grid diagonal (m).
    pub segment_threshold: f64,
    pub es3d_step: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.max_area_err < ORACLE_REL_TOL
            && self.max_d1_err < ORACLE_REL_TOL
            && self.max_d2_err < ORACLE_REL_TOL
            && self.segment_distance <= self.segment_threshold
    }
}

/// Draws a pose that is strictly inside the angle limit: altitude in
/// [10, 300] m, oblique angle up to 98% of the limit, random bearing.
pub fn random_feasible_pose<R: Rng>(rng: &mut R, g: &GroundTarget, c: &CameraConstants) -> Placement {
    let z = rng.gen_range(10.0..300.0);
    let theta = rng.gen_range(0.0..0.98 * c.theta0);
    let rho = z * theta.tan();
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    Placement {
        q: [g.w_g[0] + rho * phi.cos(), g.w_g[1] + rho * phi.sin()],
        z,
    }
}

/// Compares the closed forms against the oracle on `samples` random poses
/// and runs the 3D-search segment check.
pub fn validate_geometry(
    s: &Scenario,
    samples: usize,
    seed: u64,
    es3d_step: f64,
) -> Result<ValidationReport, ValidateError> {
    assert!(samples >= 1, "samples must be >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_area_err = 0.0_f64;
    let mut max_d1_err = 0.0_f64;
    let mut max_d2_err = 0.0_f64;
    for _ in 0..samples {
        let p = random_feasible_pose(&mut rng, &s.gt, &s.consts);
        let fp = geometry::footprint_oracle(&p, &s.gt, &s.cam).expect("pose strictly feasible");
        let area = geometry::coverage_area(&p, &s.gt, &s.cam).expect("pose strictly feasible");
        let (d1, d2) = geometry::edge_distances(&p, &s.gt, &s.consts).expect("pose strictly feasible");
        max_area_err = max_area_err.max((fp.area - area).abs() / fp.area);
        max_d1_err = max_d1_err.max((fp.d1 - d1).abs() / fp.d1);
        max_d2_err = max_d2_err.max((fp.d2 - d2).abs() / fp.d2);
    }
    let es3d = baselines::exhaustive_search_3d(s, es3d_step)?;
    let segment_distance = baselines::distance_to_segment(es3d.placement.q, s);
    Ok(ValidationReport {
        samples,
        max_area_err,
        max_d1_err,
        max_d2_err,
        segment_distance,
        segment_threshold: es3d_step * std::f64::consts::SQRT_2 * 1.005,
        es3d_step,
    })
}
