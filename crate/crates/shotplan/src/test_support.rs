//! Shared fixtures for unit, integration, and acceptance tests.

use crate::channel::{BaseStation, LinkBudget};
use crate::geometry::{CameraIntrinsics, GroundTarget};
use crate::problem::Scenario;

pub use crate::validate::random_feasible_pose;

pub const PAPER_R0: f64 = 20.0;

/// The reference camera: 35 mm focal length, 15.6 x 23.5 mm sensor,
/// 3.9 um pixels.
pub fn paper_camera() -> CameraIntrinsics {
    CameraIntrinsics {
        f0: 0.035,
        w0: 0.0156,
        l0: 0.0235,
        delta0: 3.9e-6,
        bits_per_pixel: 24,
    }
}

/// Reference scenario: BS at (0, 0, 25) m, target at (150, 200) with a
/// 20 m radius, compression ratio 0.8, 1 MHz bandwidth.
pub fn paper_scenario(i_min: f64, gamma0: f64) -> Scenario {
    Scenario::new(
        BaseStation { w_b: [0.0, 0.0], z_b: 25.0 },
        GroundTarget { w_g: [150.0, 200.0], r0: PAPER_R0 },
        paper_camera(),
        LinkBudget { bandwidth: 1e6, gamma0 },
        i_min,
        0.8,
    )
    .expect("reference scenario is valid")
}

/// Same scenario with the target directly under the BS (`d_gb = 0`).
pub fn degenerate_scenario(i_min: f64, gamma0: f64) -> Scenario {
    Scenario::new(
        BaseStation { w_b: [0.0, 0.0], z_b: 25.0 },
        GroundTarget { w_g: [0.0, 0.0], r0: PAPER_R0 },
        paper_camera(),
        LinkBudget { bandwidth: 1e6, gamma0 },
        i_min,
        0.8,
    )
    .expect("degenerate scenario is valid")
}
