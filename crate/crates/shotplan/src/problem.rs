//! The placement problem: scenario bundle, the reduction of the horizontal
//! coordinate to the BS-target segment, the rate-equivalent objective, and
//! exact constraint residuals in the reduced (eta, z) variables.
//!
//! The optimal horizontal coordinate always lies on the segment between the
//! base station and the target: any off-segment point at the same target
//! offset and altitude has identical resolution but a strictly longer BS
//! distance, hence a lower rate. `eta` parameterizes that segment
//! (`eta = 0` over the target, `eta = 1` over the BS).

use crate::channel::{self, BaseStation, LinkBudget};
use crate::geometry::{self, CameraConstants, CameraIntrinsics, GroundTarget, Placement};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ProblemError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

/// Everything that defines one placement problem instance.
#[derive(Debug, Clone, Copy)]
pub struct Scenario {
    pub bs: BaseStation,
    pub gt: GroundTarget,
    pub cam: CameraIntrinsics,
    pub consts: CameraConstants,
    pub link: LinkBudget,
    /// Minimum acceptable image resolution, in (0, 1).
    pub i_min: f64,
    /// Compression ratio, in [0, 1].
    pub alpha: f64,
    /// Uncompressed image size in bits, fixed by the camera.
    pub image_bits: f64,
    /// Horizontal BS-target distance (m).
    pub d_gb: f64,
}

impl Scenario {
    pub fn new(
        bs: BaseStation,
        gt: GroundTarget,
        cam: CameraIntrinsics,
        link: LinkBudget,
        i_min: f64,
        alpha: f64,
    ) -> Result<Self, ProblemError> {
        cam.validate().map_err(ProblemError::InvalidScenario)?;
        if !(gt.r0 > 0.0) {
            return Err(ProblemError::InvalidScenario(format!("gt.r0 must be positive, got {}", gt.r0)));
        }
        if !(bs.z_b >= 0.0) {
            return Err(ProblemError::InvalidScenario(format!("bs.z must be non-negative, got {}", bs.z_b)));
        }
        if !(i_min > 0.0 && i_min < 1.0) {
            return Err(ProblemError::InvalidScenario(format!("i_min must be in (0, 1), got {i_min}")));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(ProblemError::InvalidScenario(format!("alpha must be in [0, 1], got {alpha}")));
        }
        if !(link.bandwidth > 0.0) || !(link.gamma0 > 0.0) {
            return Err(ProblemError::InvalidScenario(
                "link bandwidth and gamma0 must be positive".into(),
            ));
        }
        let dx = gt.w_g[0] - bs.w_b[0];
        let dy = gt.w_g[1] - bs.w_b[1];
        Ok(Self {
            bs,
            gt,
            cam,
            consts: CameraConstants::derive(&cam, gt.r0),
            link,
            i_min,
            alpha,
            image_bits: channel::image_size_bits(&cam),
            d_gb: (dx * dx + dy * dy).sqrt(),
        })
    }

    /// Switches the image-size model to the `2^n` pixel-level convention.
    pub fn with_pixel_level_image_size(mut self) -> Self {
        self.image_bits = channel::image_size_bits_pixel_levels(&self.cam);
        self
    }

    /// Resolution, rate, and delay at a placement, or `None` when the pose
    /// is at or beyond the angle limit.
    ///
    /// The image is transmitted at the required resolution level `i_min`
    /// (captures above the requirement are downsampled before transmission),
    /// so minimizing the delay is exactly equivalent to maximizing the rate.
    pub fn evaluate(&self, p: &Placement) -> Option<PointMetrics> {
        let resolution = geometry::resolution(p, &self.gt, &self.consts).ok()?;
        let rate = channel::achievable_rate(p, &self.bs, &self.link).ok()?;
        let delay = channel::transmission_time(self.i_min, rate, self.image_bits, self.alpha).ok()?;
        Some(PointMetrics { resolution, rate, delay })
    }

    /// Exact feasibility of a placement for the original constraints:
    /// resolution requirement, angle limit, and containment.
    pub fn placement_feasible(&self, p: &Placement, tol: f64) -> bool {
        if !geometry::capture_feasible(p, &self.gt, &self.consts) {
            return false;
        }
        match (
            geometry::resolution(p, &self.gt, &self.consts),
            geometry::containment_ok(p, &self.gt, &self.consts, tol),
        ) {
            (Ok(res), Ok(contained)) => res >= self.i_min - tol && contained,
            _ => false,
        }
    }
}

/// Delay-model quantities at one placement.
#[derive(Debug, Clone, Copy)]
pub struct PointMetrics {
    pub resolution: f64,
    pub rate: f64,
    pub delay: f64,
}

/// UAV position in the reduced variables: segment weight plus altitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedPoint {
    /// Horizontal coordinate indicator in [0, 1].
    pub eta: f64,
    /// Altitude (m).
    pub z: f64,
}

/// Signed slacks of the three reduced constraints; a point is feasible iff
/// all are `>= -tol`.
#[derive(Debug, Clone, Copy)]
pub struct ConstraintResiduals {
    /// Log-domain resolution slack, `ln(I / i_min)`; `-inf` when the angle
    /// limit makes the log argument nonpositive.
    pub resolution_log: f64,
    /// Angle-limit slack `b1 z - eta d_gb` (m).
    pub angle: f64,
    /// Containment slack (m^2).
    pub containment: f64,
}

/// Maps the reduced point back to a 3D placement on the BS-target segment.
pub fn embed(r: &ReducedPoint, s: &Scenario) -> Placement {
    Placement {
        q: [
            r.eta * s.bs.w_b[0] + (1.0 - r.eta) * s.gt.w_g[0],
            r.eta * s.bs.w_b[1] + (1.0 - r.eta) * s.gt.w_g[1],
        ],
        z: r.z,
    }
}

/// The convex objective whose minimization is equivalent to maximizing the
/// rate: squared 3D distance to the BS, `(1 - eta)^2 d_gb^2 + (z - z_b)^2`.
pub fn reduced_objective(r: &ReducedPoint, s: &Scenario) -> f64 {
    let h = (1.0 - r.eta) * s.d_gb;
    h * h + (r.z - s.bs.z_b) * (r.z - s.bs.z_b)
}

/// Exact residuals of the reduced constraints at `(eta, z)`.
pub fn residuals(r: &ReducedPoint, s: &Scenario) -> ConstraintResiduals {
    let (eta, z, d) = (r.eta, r.z, s.d_gb);
    let c = &s.consts;
    let rho2 = eta * eta * d * d;
    let angle = c.b1 * z - eta * d;
    let log_arg = z * z - rho2 / (c.b1 * c.b1);
    let resolution_log = if log_arg > 0.0 && z > 0.0 {
        2.0 * log_arg.ln() - 1.5 * (z * z + rho2).ln() - 3.0 * z.ln() - (s.i_min / c.a).ln()
    } else {
        f64::NEG_INFINITY
    };
    let lateral = (c.b2 * c.b2 * z * z + (1.0 + c.b2 * c.b2) * rho2).sqrt();
    let containment = (z * z + rho2) - s.gt.r0 * (c.b1 * z + eta * d).max(lateral);
    ConstraintResiduals { resolution_log, angle, containment }
}

/// Feasibility of a reduced point for the full constraint set.
pub fn feasible(r: &ReducedPoint, s: &Scenario, tol: f64) -> bool {
    if !(0.0..=1.0).contains(&r.eta) || !(r.z > 0.0) {
        return false;
    }
    let res = residuals(r, s);
    res.resolution_log >= -tol && res.angle >= -tol && res.containment >= -tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::paper_scenario;
    use crate::geometry;

    #[test]
    fn embed_endpoints_and_midpoint() {
        let s = paper_scenario(0.3, 1e7);
        let over_gt = embed(&ReducedPoint { eta: 0.0, z: 100.0 }, &s);
        assert_eq!(over_gt.q, s.gt.w_g);
        let over_bs = embed(&ReducedPoint { eta: 1.0, z: 100.0 }, &s);
        assert_eq!(over_bs.q, s.bs.w_b);
        let mid = embed(&ReducedPoint { eta: 0.5, z: 100.0 }, &s);
        assert_eq!(mid.q, [75.0, 100.0]);
        assert!((s.d_gb - 250.0).abs() < 1e-12);
        let dx = mid.q[0] - s.gt.w_g[0];
        let dy = mid.q[1] - s.gt.w_g[1];
        assert!(((dx * dx + dy * dy).sqrt() - 125.0).abs() < 1e-9);
    }

    #[test]
    fn objective_matches_rate() {
        let s = paper_scenario(0.3, 1e7);
        let r = ReducedPoint { eta: 1.0, z: s.bs.z_b };
        assert_eq!(reduced_objective(&r, &s), 0.0);
        let r0 = ReducedPoint { eta: 0.0, z: s.bs.z_b };
        assert!((reduced_objective(&r0, &s) - s.d_gb * s.d_gb).abs() < 1e-9);
        // Rate via the 3D channel model equals the (eta, z) closed form.
        let r = ReducedPoint { eta: 0.37, z: 80.0 };
        let direct = crate::channel::achievable_rate(&embed(&r, &s), &s.bs, &s.link).unwrap();
        let reduced = s.link.bandwidth * (1.0 + s.link.gamma0 / reduced_objective(&r, &s)).log2();
        assert!((direct - reduced).abs() / direct < 1e-12);
    }

    #[test]
    fn residual_identities() {
        let s = paper_scenario(0.3, 1e7);
        let r = ReducedPoint { eta: 0.2, z: 110.0 };
        let res = residuals(&r, &s);
        let i = geometry::resolution(&embed(&r, &s), &s.gt, &s.consts).unwrap();
        assert!((res.resolution_log - (i / s.i_min).ln()).abs() < 1e-12);
        // Angle boundary: eta = b1 z / d.
        let boundary = ReducedPoint { eta: s.consts.b1 * 10.0 / s.d_gb, z: 10.0 };
        assert!(residuals(&boundary, &s).angle.abs() < 1e-9);
        // Vertical containment boundary: z = r0 b1.
        let vc = ReducedPoint { eta: 0.0, z: s.gt.r0 * s.consts.b1 };
        assert!(residuals(&vc, &s).containment.abs() < 1e-6);
        // Beyond the angle limit the log residual is the -inf sentinel.
        let bad = ReducedPoint { eta: 1.0, z: 1.0 };
        assert_eq!(residuals(&bad, &s).resolution_log, f64::NEG_INFINITY);
    }

    #[test]
    fn residual_sign_matches_direct_geometry() {
        let s = paper_scenario(0.25, 1e7);
        for &(eta, z) in &[(0.0, 130.0), (0.1, 95.0), (0.3, 60.0), (0.5, 40.0), (0.7, 150.0)] {
            let r = ReducedPoint { eta, z };
            let res = residuals(&r, &s);
            let p = embed(&r, &s);
            if let Ok(i) = geometry::resolution(&p, &s.gt, &s.consts) {
                assert_eq!(res.resolution_log >= 0.0, i >= s.i_min, "at eta={eta} z={z}");
                let contained = geometry::containment_ok(&p, &s.gt, &s.consts, 0.0).unwrap();
                assert_eq!(res.containment >= 0.0, contained, "at eta={eta} z={z}");
            }
            assert_eq!(res.angle >= 0.0, geometry::capture_feasible(&p, &s.gt, &s.consts));
            assert_eq!(feasible(&r, &s, 1e-9), s.placement_feasible(&p, 1e-9), "at eta={eta} z={z}");
        }
    }

    #[test]
    fn feasibility_examples() {
        let s = paper_scenario(0.3, 1e7);
        let z0 = (s.consts.a / s.i_min).sqrt().max(s.gt.r0 * s.consts.b1);
        assert!((z0 - 118.30854647151786).abs() < 1e-9);
        assert!(feasible(&ReducedPoint { eta: 0.0, z: z0 }, &s, 1e-9));
        assert!(!feasible(&ReducedPoint { eta: 1.0, z: s.bs.z_b }, &s, 1e-9));
        assert!(!feasible(&ReducedPoint { eta: 1.1, z: 100.0 }, &s, 1e-9));
    }

    #[test]
    fn delay_decreasing_in_eta_at_fixed_z() {
        let s = paper_scenario(0.1, 1e7);
        let z = 120.0;
        let mut prev = f64::INFINITY;
        let mut seen = 0;
        for i in 0..=100 {
            let r = ReducedPoint { eta: i as f64 / 100.0, z };
            if feasible(&r, &s, 0.0) {
                let m = s.evaluate(&embed(&r, &s)).unwrap();
                assert!(m.delay < prev, "delay not decreasing at eta={}", r.eta);
                prev = m.delay;
                seen += 1;
            }
        }
        assert!(seen > 10);
    }

    #[test]
    fn off_segment_point_same_resolution_lower_rate() {
        let s = paper_scenario(0.2, 1e7);
        let r = ReducedPoint { eta: 0.3, z: 90.0 };
        let on = embed(&r, &s);
        // Rotate the offset out of the BS-target plane, keeping |q - w_g|.
        let rho = r.eta * s.d_gb;
        let off = Placement::new(s.gt.w_g[0] + rho, s.gt.w_g[1], r.z);
        let i_on = geometry::resolution(&on, &s.gt, &s.consts).unwrap();
        let i_off = geometry::resolution(&off, &s.gt, &s.consts).unwrap();
        assert!((i_on - i_off).abs() / i_on < 1e-12);
        let r_on = crate::channel::achievable_rate(&on, &s.bs, &s.link).unwrap();
        let r_off = crate::channel::achievable_rate(&off, &s.bs, &s.link).unwrap();
        assert!(r_off < r_on);
    }

    #[test]
    fn scenario_validation() {
        let s = paper_scenario(0.3, 1e7);
        assert!(Scenario::new(s.bs, s.gt, s.cam, s.link, 1.5, s.alpha).is_err());
        assert!(Scenario::new(s.bs, s.gt, s.cam, s.link, s.i_min, -0.1).is_err());
        let bad_gt = GroundTarget { w_g: s.gt.w_g, r0: 0.0 };
        assert!(Scenario::new(s.bs, bad_gt, s.cam, s.link, s.i_min, s.alpha).is_err());
    }
}
