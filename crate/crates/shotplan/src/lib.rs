//! Planning toolkit for camera-equipped UAV shot placement.
//!
//! Given a base station, a circular ground target, a camera, and a
//! free-space link budget, the crate finds the 3D shooting position that
//! minimizes the time to transmit the captured image back to the base
//! station while meeting a minimum image-resolution requirement.
//!
//! Modules:
//! - [`geometry`]: oblique-photography footprint, resolution, and
//!   containment, with a corner-projection oracle for validation.
//! - [`channel`]: free-space path-loss link budget, rate, and the
//!   transmission-time model.
//! - [`problem`]: the scenario bundle, the reduction of the horizontal
//!   coordinate to the BS-target segment, and exact constraint residuals.
//! - [`solver`]: the alternating convex-restriction solver.
//! - [`baselines`]: vertical-photography scheme and exhaustive grid
//!   searches (rayon-parallel with the default `parallel` feature).
//! - [`config`] / [`sweep`] / [`validate`]: run configuration, scheme
//!   comparison sweeps with CSV output, and validation runs.

pub mod baselines;
pub mod channel;
pub mod config;
pub mod geometry;
pub mod problem;
pub mod solver;
pub mod sweep;
pub mod validate;

#[doc(hidden)]
pub mod test_support;

pub use baselines::{BaselineResult, Scheme};
pub use channel::{BaseStation, LinkBudget};
pub use config::{load_config, RunConfig};
pub use geometry::{CameraConstants, CameraIntrinsics, GroundTarget, Placement};
pub use problem::{ReducedPoint, Scenario};
pub use solver::{bcd_solve, SolveResult, SolverConfig, TerminationStatus};
