//! UAV-to-base-station link budget, achievable rate, image size, and the
//! transmission-time model.
//!
//! Operations take linear (non-dB) quantities only; dB/dBm inputs are
//! converted once at config load.

use crate::geometry::{CameraIntrinsics, Placement};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("UAV and BS coincide; channel gain undefined")]
    ZeroDistance,
    #[error("achievable rate is zero; transmission time undefined")]
    ZeroRate,
}

/// Base station pose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseStation {
    pub w_b: [f64; 2],
    /// Antenna altitude (m), non-negative.
    pub z_b: f64,
}

/// Link parameters reduced to bandwidth and the received SNR at 1 m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// Channel bandwidth (Hz).
    pub bandwidth: f64,
    /// Received SNR at the 1 m reference distance (linear),
    /// `gamma0 = P * beta0 / (sigma^2 * Gamma)`.
    pub gamma0: f64,
}

impl LinkBudget {
    /// Builds the budget from its components, all linear.
    pub fn from_components(
        bandwidth: f64,
        transmit_power: f64,
        noise_power: f64,
        snr_gap: f64,
        beta0: f64,
    ) -> Self {
        Self {
            bandwidth,
            gamma0: transmit_power * beta0 / (noise_power * snr_gap),
        }
    }
}

/// 3D distance between the UAV and the BS.
pub fn uav_bs_distance(p: &Placement, bs: &BaseStation) -> f64 {
    let dx = p.q[0] - bs.w_b[0];
    let dy = p.q[1] - bs.w_b[1];
    let dz = p.z - bs.z_b;
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Free-space path-loss channel power gain, `beta0 / d^2`.
pub fn channel_gain(p: &Placement, bs: &BaseStation, beta0: f64) -> Result<f64, ChannelError> {
    let d = uav_bs_distance(p, bs);
    if d == 0.0 {
        return Err(ChannelError::ZeroDistance);
    }
    Ok(beta0 / (d * d))
}

/// Achievable rate in bits per second: `B log2(1 + gamma0 / d^2)`.
pub fn achievable_rate(p: &Placement, bs: &BaseStation, lb: &LinkBudget) -> Result<f64, ChannelError> {
    let d2 = {
        let dx = p.q[0] - bs.w_b[0];
        let dy = p.q[1] - bs.w_b[1];
        let dz = p.z - bs.z_b;
        dx * dx + dy * dy + dz * dz
    };
    if d2 == 0.0 {
        return Err(ChannelError::ZeroDistance);
    }
    Ok(lb.bandwidth * (1.0 + lb.gamma0 / d2).log2())
}

/// Size in bits of the uncompressed captured image: pixel count times bit
/// depth.
pub fn image_size_bits(cam: &CameraIntrinsics) -> f64 {
    cam.w0 * cam.l0 / (cam.delta0 * cam.delta0) * cam.bits_per_pixel as f64
}

/// Image size with the pixel depth entering as `2^n` levels instead of `n`
/// bits. Kept only for compatibility with the level-count convention;
/// [`image_size_bits`] is the default.
pub fn image_size_bits_pixel_levels(cam: &CameraIntrinsics) -> f64 {
    cam.w0 * cam.l0 / (cam.delta0 * cam.delta0) * 2f64.powi(cam.bits_per_pixel as i32)
}

/// Time to transmit the compressed image containing the target:
/// `alpha * F * I / R`.
pub fn transmission_time(
    i_achieved: f64,
    rate: f64,
    image_bits: f64,
    alpha: f64,
) -> Result<f64, ChannelError> {
    if rate <= 0.0 {
        return Err(ChannelError::ZeroRate);
    }
    Ok(alpha * image_bits * i_achieved / rate)
}

/// dB to linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::paper_camera;

    fn bs() -> BaseStation {
        BaseStation { w_b: [0.0, 0.0], z_b: 25.0 }
    }

    #[test]
    fn distance_cases() {
        let b = bs();
        assert_eq!(uav_bs_distance(&Placement::new(0.0, 0.0, 25.0), &b), 0.0);
        assert_eq!(uav_bs_distance(&Placement::new(3.0, 4.0, 37.0), &b), 13.0);
        // Symmetric under swapping the two endpoints.
        let b2 = BaseStation { w_b: [3.0, 4.0], z_b: 37.0 };
        assert_eq!(
            uav_bs_distance(&Placement::new(3.0, 4.0, 37.0), &b),
            uav_bs_distance(&Placement::new(0.0, 0.0, 25.0), &b2)
        );
    }

    #[test]
    fn gain_inverse_square() {
        let b = BaseStation { w_b: [0.0, 0.0], z_b: 0.0 };
        let beta0 = 1e-4; // -40 dB
        let g1 = channel_gain(&Placement::new(0.0, 0.0, 1.0), &b, beta0).unwrap();
        assert!((g1 - beta0).abs() < 1e-18);
        let g100 = channel_gain(&Placement::new(0.0, 0.0, 100.0), &b, beta0).unwrap();
        assert!((g100 - 1e-8).abs() < 1e-18);
        let g200 = channel_gain(&Placement::new(0.0, 0.0, 200.0), &b, beta0).unwrap();
        assert!((g100 / g200 - 4.0).abs() < 1e-12);
        assert_eq!(
            channel_gain(&Placement::new(0.0, 0.0, 0.0), &b, beta0),
            Err(ChannelError::ZeroDistance)
        );
    }

    #[test]
    fn rate_cases() {
        let b = BaseStation { w_b: [0.0, 0.0], z_b: 0.0 };
        let lb = LinkBudget { bandwidth: 1.0, gamma0: 3.0 };
        let r = achievable_rate(&Placement::new(0.0, 0.0, 1.0), &b, &lb).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
        let lb = LinkBudget { bandwidth: 1.0, gamma0: 1e7 };
        let r = achievable_rate(&Placement::new(0.0, 0.0, 1.0), &b, &lb).unwrap();
        assert!((r - (1.0 + 1e7f64).log2()).abs() < 1e-9);
        assert!((r - 23.2535).abs() < 1e-3);
        // Monotone decreasing in distance.
        let r2 = achievable_rate(&Placement::new(0.0, 0.0, 2.0), &b, &lb).unwrap();
        assert!(r2 < r);
    }

    #[test]
    fn gamma0_from_paper_components() {
        let lb = LinkBudget::from_components(
            1e6,
            dbm_to_watts(10.0),
            dbm_to_watts(-109.0),
            db_to_linear(10.0),
            db_to_linear(-40.0),
        );
        assert!((lb.gamma0 - 7.943282347242822e6).abs() / lb.gamma0 < 1e-12);
    }

    #[test]
    fn image_size_paper_camera() {
        let cam = paper_camera();
        let pixels = cam.w0 * cam.l0 / (cam.delta0 * cam.delta0);
        assert!((pixels - 2.410256e7).abs() / pixels < 1e-4);
        let bits = image_size_bits(&cam);
        assert!((bits - 24.0 * pixels).abs() < 1.0);
        assert!((bits - 5.7848e8).abs() / bits < 1e-3);
        // Halving the pixel pitch quadruples the size.
        let mut fine = cam;
        fine.delta0 /= 2.0;
        assert!((image_size_bits(&fine) / bits - 4.0).abs() < 1e-12);
        // Level-count compatibility formula.
        let levels = image_size_bits_pixel_levels(&cam);
        assert!((levels / pixels - 2f64.powi(24)).abs() < 1.0);
    }

    #[test]
    fn transmission_time_cases() {
        let f = 1e6;
        assert!((transmission_time(1.0, f, f, 1.0).unwrap() - 1.0).abs() < 1e-12);
        let t1 = transmission_time(0.3, 1e7, image_size_bits(&paper_camera()), 0.8).unwrap();
        assert!((t1 - 13.88).abs() / t1 < 1e-3);
        let t2 = transmission_time(0.3, 1e7, image_size_bits(&paper_camera()), 0.4).unwrap();
        assert!((t1 / t2 - 2.0).abs() < 1e-12);
        assert_eq!(transmission_time(0.3, 0.0, f, 0.8), Err(ChannelError::ZeroRate));
    }
}
