//! Oblique-photography geometry: oblique angle, ground-coverage footprint,
//! image resolution, and the containment predicates that decide whether a
//! shot of the target is usable.
//!
//! The analytic closed forms (coverage area, edge distances) are paired with
//! [`footprint_oracle`], which projects the four image-plane corners through
//! the focal point onto the ground and measures the footprint directly. The
//! oracle shares no algebra with the closed forms and is used to validate
//! them.
//!
//! All lengths are in meters and all angles in radians.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    /// The oblique angle is at or beyond the usable limit; the coverage
    /// area diverges there.
    #[error("oblique angle at or beyond the usable limit (b1*z - rho = {margin} m)")]
    AngleLimit { margin: f64 },
}

/// Pinhole camera parameters carried by the UAV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraIntrinsics {
    /// Focal length (m).
    pub f0: f64,
    /// Image-plane width (m).
    pub w0: f64,
    /// Image-plane length (m).
    pub l0: f64,
    /// Pixel pitch (m).
    pub delta0: f64,
    /// Bits used to hold one pixel.
    pub bits_per_pixel: u32,
}

impl CameraIntrinsics {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("f0", self.f0),
            ("w0", self.w0),
            ("l0", self.l0),
            ("delta0", self.delta0),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(format!("camera.{name} must be positive, got {v}"));
            }
        }
        if self.bits_per_pixel == 0 {
            return Err("camera.bits_per_pixel must be positive".into());
        }
        Ok(())
    }
}

/// Constants derived from the camera and the target radius.
///
/// `b1 = 2 f0 / w0`, `b2 = 2 f0 / l0`, `a = b1 b2 pi r0^2 / 4`, and
/// `theta0 = arctan(b1)` is the maximum usable oblique angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraConstants {
    pub b1: f64,
    pub b2: f64,
    /// m^2; vertical resolution is `a / z^2`.
    pub a: f64,
    pub theta0: f64,
}

impl CameraConstants {
    pub fn derive(cam: &CameraIntrinsics, r0: f64) -> Self {
        let b1 = 2.0 * cam.f0 / cam.w0;
        let b2 = 2.0 * cam.f0 / cam.l0;
        Self {
            b1,
            b2,
            a: b1 * b2 * std::f64::consts::PI * r0 * r0 / 4.0,
            theta0: b1.atan(),
        }
    }
}

/// Circular ground target at altitude zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundTarget {
    /// Horizontal coordinate of the target center (m).
    pub w_g: [f64; 2],
    /// Target radius (m).
    pub r0: f64,
}

/// A candidate UAV pose: horizontal coordinate plus altitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    pub q: [f64; 2],
    /// Altitude (m), strictly positive.
    pub z: f64,
}

impl Placement {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { q: [x, y], z }
    }
}

/// Ground footprint measured by the corner-projection oracle.
///
/// `corners` are in cyclic order; the edge `corners[1]..corners[2]` is the
/// parallel edge nearest the camera (the one `d1` measures), the edge
/// `corners[0]..corners[1]` is a lateral edge (measured by `d2`), and
/// `corners[3]..corners[0]` is the far parallel edge.
#[derive(Debug, Clone, Copy)]
pub struct Footprint {
    pub corners: [[f64; 2]; 4],
    pub area: f64,
    /// Distance from the target center to the near parallel edge (m).
    pub d1: f64,
    /// Distance from the target center to a lateral edge (m).
    pub d2: f64,
}

fn horizontal_offset(p: &Placement, g: &GroundTarget) -> f64 {
    let dx = p.q[0] - g.w_g[0];
    let dy = p.q[1] - g.w_g[1];
    (dx * dx + dy * dy).sqrt()
}

/// Line-of-sight distance from the UAV to the target center.
pub fn slant_distance(p: &Placement, g: &GroundTarget) -> f64 {
    let rho = horizontal_offset(p, g);
    (rho * rho + p.z * p.z).sqrt()
}

/// Camera oblique angle, in `[0, pi/2)`. Zero means vertical photography.
pub fn oblique_angle(p: &Placement, g: &GroundTarget) -> f64 {
    (horizontal_offset(p, g) / p.z).atan()
}

// Strict-feasibility margin: the angle limit is treated as open, with a
// z-scaled epsilon so the check is scale invariant.
fn angle_margin(p: &Placement, g: &GroundTarget, c: &CameraConstants) -> f64 {
    c.b1 * p.z - horizontal_offset(p, g)
}

fn check_angle(p: &Placement, g: &GroundTarget, c: &CameraConstants) -> Result<(), GeometryError> {
    let margin = angle_margin(p, g, c);
    if margin <= 1e-9 * p.z {
        Err(GeometryError::AngleLimit { margin })
    } else {
        Ok(())
    }
}

/// Whether the camera can capture the target at all: the oblique angle must
/// stay below the limit `theta0`.
pub fn capture_feasible(p: &Placement, g: &GroundTarget, c: &CameraConstants) -> bool {
    angle_margin(p, g, c) >= 0.0
}

/// Ground area covered by the camera (m^2).
///
/// Equals the vertical coverage `w0 l0 z^2 / f0^2` scaled by a factor that
/// grows with the oblique angle and diverges at the angle limit.
pub fn coverage_area(
    p: &Placement,
    g: &GroundTarget,
    cam: &CameraIntrinsics,
) -> Result<f64, GeometryError> {
    let consts = CameraConstants::derive(cam, g.r0);
    check_angle(p, g, &consts)?;
    let theta = oblique_angle(p, g);
    let s_v = cam.w0 * cam.l0 * p.z * p.z / (cam.f0 * cam.f0);
    let t = theta.tan();
    let k = 1.0 - (cam.w0 * cam.w0 / (4.0 * cam.f0 * cam.f0)) * t * t;
    Ok(s_v / (k * k * theta.cos().powi(3)))
}

/// Image resolution: ratio of the target disc area to the coverage area.
///
/// Satisfies `resolution * coverage_area = pi r0^2` identically.
pub fn resolution(
    p: &Placement,
    g: &GroundTarget,
    c: &CameraConstants,
) -> Result<f64, GeometryError> {
    check_angle(p, g, c)?;
    let rho = horizontal_offset(p, g);
    let z = p.z;
    let num = c.a * (z * z - rho * rho / (c.b1 * c.b1)).powi(2);
    let den = (rho * rho + z * z).powf(1.5) * z.powi(3);
    Ok(num / den)
}

/// Distances from the target center to the near parallel footprint edge
/// (`d1`) and to a lateral edge (`d2`).
pub fn edge_distances(
    p: &Placement,
    g: &GroundTarget,
    c: &CameraConstants,
) -> Result<(f64, f64), GeometryError> {
    check_angle(p, g, c)?;
    let rho = horizontal_offset(p, g);
    let z = p.z;
    let s = z * z + rho * rho;
    let d1 = s / (c.b1 * z + rho);
    let d2 = s / (c.b2 * c.b2 * z * z + (1.0 + c.b2 * c.b2) * rho * rho).sqrt();
    Ok((d1, d2))
}

/// Whether the target disc lies entirely inside the footprint.
pub fn containment_ok(
    p: &Placement,
    g: &GroundTarget,
    c: &CameraConstants,
    tol: f64,
) -> Result<bool, GeometryError> {
    let (d1, d2) = edge_distances(p, g, c)?;
    Ok(g.r0 <= d1.min(d2) + tol)
}

/// Projects the four image-plane corners through the focal point onto the
/// ground plane and measures the footprint directly.
///
/// The camera boresight passes through the target center (auto-focus) and
/// the image-plane width axis lies in the vertical plane containing the UAV
/// and the target. When the UAV is directly overhead the tilt direction is
/// undefined; it is taken along +x, which does not affect area or distances.
pub fn footprint_oracle(
    p: &Placement,
    g: &GroundTarget,
    cam: &CameraIntrinsics,
) -> Result<Footprint, GeometryError> {
    let rho = horizontal_offset(p, g);
    let z = p.z;
    // Ground basis: ex points from the target toward the UAV's ground
    // projection, ey is its left-hand perpendicular.
    let (ex, ey) = if rho > 0.0 {
        let inv = 1.0 / rho;
        let ex = [(p.q[0] - g.w_g[0]) * inv, (p.q[1] - g.w_g[1]) * inv];
        (ex, [-ex[1], ex[0]])
    } else {
        ([1.0, 0.0], [0.0, 1.0])
    };
    let theta = (rho / z).atan();
    let (sin_t, cos_t) = theta.sin_cos();
    // Camera axes in the (ex, z) tilt plane: forward points from the UAV to
    // the target center; the width axis tilts with it.
    let fwd = [-sin_t, -cos_t]; // (ex component, z component)
    let wid = [-cos_t, sin_t];
    let mut corners = [[0.0_f64; 2]; 4];
    let image_corners = [
        (cam.w0 / 2.0, cam.l0 / 2.0),
        (-cam.w0 / 2.0, cam.l0 / 2.0),
        (-cam.w0 / 2.0, -cam.l0 / 2.0),
        (cam.w0 / 2.0, -cam.l0 / 2.0),
    ];
    for (i, &(u, v)) in image_corners.iter().enumerate() {
        // Ray direction in (ex, ey, z) coordinates.
        let rx = cam.f0 * fwd[0] + u * wid[0];
        let rz = cam.f0 * fwd[1] + u * wid[1];
        let ry = v;
        if rz >= 0.0 {
            return Err(GeometryError::AngleLimit {
                margin: angle_margin(p, g, &CameraConstants::derive(cam, g.r0)),
            });
        }
        let t = -z / rz;
        let gx = rho + t * rx;
        let gy = t * ry;
        corners[i] = [
            g.w_g[0] + gx * ex[0] + gy * ey[0],
            g.w_g[1] + gx * ex[1] + gy * ey[1],
        ];
    }
    let area = shoelace(&corners);
    let d1 = point_edge_distance(g.w_g, corners[1], corners[2]);
    let d2 = point_edge_distance(g.w_g, corners[0], corners[1]);
    Ok(Footprint { corners, area, d1, d2 })
}

fn shoelace(c: &[[f64; 2]; 4]) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        let j = (i + 1) % 4;
        s += c[i][0] * c[j][1] - c[j][0] * c[i][1];
    }
    0.5 * s.abs()
}

fn point_edge_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    (d[0] * ap[1] - d[1] * ap[0]).abs() / (d[0] * d[0] + d[1] * d[1]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::{paper_camera, random_feasible_pose, PAPER_R0};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn target() -> GroundTarget {
        GroundTarget { w_g: [0.0, 0.0], r0: PAPER_R0 }
    }

    fn consts() -> CameraConstants {
        CameraConstants::derive(&paper_camera(), PAPER_R0)
    }

    #[test]
    fn slant_distance_pythagorean() {
        let g = target();
        assert_eq!(slant_distance(&Placement::new(3.0, 4.0, 12.0), &g), 13.0);
        assert_eq!(slant_distance(&Placement::new(0.0, 0.0, 100.0), &g), 100.0);
        let near_ground = slant_distance(&Placement::new(150.0, 200.0, 1e-4), &g);
        assert!((near_ground - 250.0).abs() < 1e-6);
    }

    #[test]
    fn oblique_angle_cases() {
        let g = target();
        assert_eq!(oblique_angle(&Placement::new(0.0, 0.0, 50.0), &g), 0.0);
        let th = oblique_angle(&Placement::new(80.0, 0.0, 80.0), &g);
        assert!((th - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        let c = consts();
        let z = 30.0;
        let rho = z * c.theta0.tan() - 1e-6;
        let th = oblique_angle(&Placement::new(rho, 0.0, z), &g);
        assert!(th < c.theta0 && c.theta0 - th < 1e-6);
    }

    #[test]
    fn capture_feasibility_boundary() {
        let g = target();
        let c = consts();
        assert!((c.b1 - 4.487179487179488).abs() < 1e-12);
        assert!(capture_feasible(&Placement::new(40.0, 0.0, 10.0), &g, &c));
        assert!(!capture_feasible(&Placement::new(50.0, 0.0, 10.0), &g, &c));
        assert!(capture_feasible(&Placement::new(0.0, 0.0, 1.0), &g, &c));
    }

    #[test]
    fn vertical_coverage_and_resolution() {
        let g = target();
        let cam = paper_camera();
        let c = consts();
        let p = Placement::new(0.0, 0.0, 100.0);
        let area = coverage_area(&p, &g, &cam).unwrap();
        assert!((area - 2992.653061224489).abs() / area < 1e-12);
        let res = resolution(&p, &g, &c).unwrap();
        assert!((res - 0.41990736504609905).abs() < 1e-12);
        assert!((res - c.a / (100.0 * 100.0)).abs() < 1e-12);
        // z doubling quadruples the vertical area.
        let area2 = coverage_area(&Placement::new(0.0, 0.0, 200.0), &g, &cam).unwrap();
        assert!((area2 / area - 4.0).abs() < 1e-12);
    }

    #[test]
    fn coverage_rejects_angle_limit() {
        let g = target();
        let cam = paper_camera();
        let c = consts();
        let p = Placement::new(c.b1 * 10.0, 0.0, 10.0);
        assert!(matches!(
            coverage_area(&p, &g, &cam),
            Err(GeometryError::AngleLimit { .. })
        ));
        assert!(matches!(resolution(&p, &g, &c), Err(GeometryError::AngleLimit { .. })));
    }

    #[test]
    fn resolution_vanishes_toward_angle_limit() {
        let g = target();
        let c = consts();
        let z = 50.0;
        let p = Placement::new(c.b1 * z * (1.0 - 1e-7), 0.0, z);
        assert!(resolution(&p, &g, &c).unwrap() < 1e-10);
    }

    #[test]
    fn vertical_edge_distances() {
        let g = target();
        let c = consts();
        let p = Placement::new(0.0, 0.0, 100.0);
        let (d1, d2) = edge_distances(&p, &g, &c).unwrap();
        assert!((d1 - 100.0 / c.b1).abs() < 1e-12);
        assert!((d2 - 100.0 / c.b2).abs() < 1e-12);
        assert!((d1 - 22.285714285714285).abs() < 1e-9);
        assert!((d2 - 33.57142857142857).abs() < 1e-9);
    }

    #[test]
    fn containment_boundary() {
        let g = target();
        let c = consts();
        // r0 = z / b1 at the vertical boundary.
        let z = PAPER_R0 * c.b1;
        assert!(containment_ok(&Placement::new(0.0, 0.0, z), &g, &c, 1e-9).unwrap());
        assert!(!containment_ok(&Placement::new(0.0, 0.0, 50.0), &g, &c, 1e-9).unwrap());
        let tiny = GroundTarget { w_g: [0.0, 0.0], r0: 1e-6 };
        let ct = CameraConstants::derive(&paper_camera(), tiny.r0);
        assert!(containment_ok(&Placement::new(10.0, 5.0, 20.0), &tiny, &ct, 0.0).unwrap());
    }

    #[test]
    fn oracle_vertical_rectangle() {
        let g = target();
        let cam = paper_camera();
        let c = consts();
        let fp = footprint_oracle(&Placement::new(0.0, 0.0, 100.0), &g, &cam).unwrap();
        let hw = 100.0 / c.b1;
        let hl = 100.0 / c.b2;
        assert!((fp.area - 4.0 * hw * hl).abs() < 1e-9);
        assert!((fp.d1 - hw).abs() < 1e-9);
        assert!((fp.d2 - hl).abs() < 1e-9);
        for corner in fp.corners {
            assert!((corner[0].abs() - hw).abs() < 1e-9);
            assert!((corner[1].abs() - hl).abs() < 1e-9);
        }
    }

    #[test]
    fn oracle_matches_closed_forms() {
        let g = target();
        let cam = paper_camera();
        let c = consts();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let p = random_feasible_pose(&mut rng, &g, &c);
            let fp = footprint_oracle(&p, &g, &cam).unwrap();
            let area = coverage_area(&p, &g, &cam).unwrap();
            let (d1, d2) = edge_distances(&p, &g, &c).unwrap();
            assert!((fp.area - area).abs() / area < 1e-6, "area mismatch at {p:?}");
            assert!((fp.d1 - d1).abs() / d1 < 1e-6, "d1 mismatch at {p:?}");
            assert!((fp.d2 - d2).abs() / d2 < 1e-6, "d2 mismatch at {p:?}");
        }
    }

    #[test]
    fn resolution_monotone_in_offset() {
        let g = target();
        let c = consts();
        let z = 120.0;
        let mut prev = f64::INFINITY;
        for i in 0..200 {
            let rho = c.b1 * z * 0.995 * i as f64 / 200.0;
            let r = resolution(&Placement::new(rho, 0.0, z), &g, &c).unwrap();
            assert!(r < prev);
            prev = r;
        }
    }

    proptest! {
        #[test]
        fn identity_resolution_times_area(seed in 0u64..1000) {
            let g = target();
            let cam = paper_camera();
            let c = consts();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_feasible_pose(&mut rng, &g, &c);
            let prod = resolution(&p, &g, &c).unwrap() * coverage_area(&p, &g, &cam).unwrap();
            let expect = std::f64::consts::PI * g.r0 * g.r0;
            prop_assert!((prod - expect).abs() / expect < 1e-9);
        }

        #[test]
        fn joint_scaling(seed in 0u64..1000) {
            let g = target();
            let cam = paper_camera();
            let c = consts();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_feasible_pose(&mut rng, &g, &c);
            let p2 = Placement { q: [2.0 * p.q[0], 2.0 * p.q[1]], z: 2.0 * p.z };
            prop_assert!((oblique_angle(&p, &g) - oblique_angle(&p2, &g)).abs() < 1e-12);
            let a1 = coverage_area(&p, &g, &cam).unwrap();
            let a2 = coverage_area(&p2, &g, &cam).unwrap();
            prop_assert!((a2 / a1 - 4.0).abs() < 1e-9);
            let r1 = resolution(&p, &g, &c).unwrap();
            let r2 = resolution(&p2, &g, &c).unwrap();
            prop_assert!((r1 / r2 - 4.0).abs() < 1e-9);
        }
    }
}
