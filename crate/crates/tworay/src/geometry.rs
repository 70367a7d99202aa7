//! Flat-earth link geometry: ray path lengths, incidence angle, ray phase
//! difference, radio horizon, and the two-ray breakpoint distance.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::units::Frequency;

pub const MEAN_EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Effective earth-radius factor for standard atmospheric refraction.
pub const DEFAULT_K_FACTOR: f64 = 4.0 / 3.0;

/// Antenna heights and horizontal separation of a point-to-point link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    tx_height_m: f64,
    rx_height_m: f64,
    horizontal_distance_m: f64,
}

/// Solved ray paths for a link: direct length, ground-reflected length,
/// and the grazing angle of the reflected ray, measured from the ground
/// plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayPaths {
    pub los_length_m: f64,
    pub reflected_length_m: f64,
    pub incidence_angle_rad: f64,
}

impl RayPaths {
    pub fn incidence_angle_deg(&self) -> f64 {
        self.incidence_angle_rad.to_degrees()
    }
}

impl LinkGeometry {
    pub fn new(tx_height_m: f64, rx_height_m: f64, horizontal_distance_m: f64) -> Result<Self> {
        for (name, height) in [("tx height", tx_height_m), ("rx height", rx_height_m)] {
            if !height.is_finite() || height <= 0.0 {
                return Err(Error::domain(format!(
                    "{name} must be positive (got {height} m)"
                )));
            }
        }
        if !horizontal_distance_m.is_finite() || horizontal_distance_m < 0.0 {
            return Err(Error::domain(format!(
                "horizontal distance must be >= 0 (got {horizontal_distance_m} m)"
            )));
        }
        Ok(Self {
            tx_height_m,
            rx_height_m,
            horizontal_distance_m,
        })
    }

    pub fn tx_height_m(&self) -> f64 {
        self.tx_height_m
    }

    pub fn rx_height_m(&self) -> f64 {
        self.rx_height_m
    }

    pub fn horizontal_distance_m(&self) -> f64 {
        self.horizontal_distance_m
    }

    /// Direct path, image-point reflected path, and grazing angle.
    /// At d = 0 the incidence angle is 90 degrees.
    pub fn solve(&self) -> RayPaths {
        let d = self.horizontal_distance_m;
        let sum = self.tx_height_m + self.rx_height_m;
        let diff = self.tx_height_m - self.rx_height_m;
        RayPaths {
            los_length_m: f64::hypot(d, diff),
            reflected_length_m: f64::hypot(d, sum),
            incidence_angle_rad: sum.atan2(d),
        }
    }

    /// Narrowband phase lag of the reflected ray relative to the direct
    /// ray: 2 pi ((x + x') - l) / lambda. Never negative.
    pub fn phase_difference_rad(&self, freq: Frequency) -> f64 {
        let paths = self.solve();
        let delta = paths.reflected_length_m - paths.los_length_m;
        (2.0 * PI * delta / freq.wavelength_m()).max(0.0)
    }
}

/// Distance to the radio horizon for an antenna height, using an
/// effective earth radius k * Re. Validity gate for the flat-earth
/// assumption: links much shorter than this are safely flat.
pub fn radio_horizon_m(height_m: f64, k_factor: f64) -> Result<f64> {
    if !height_m.is_finite() || height_m < 0.0 {
        return Err(Error::domain(format!(
            "horizon height must be >= 0 (got {height_m} m)"
        )));
    }
    if !k_factor.is_finite() || k_factor <= 0.0 {
        return Err(Error::domain(format!(
            "k-factor must be positive (got {k_factor})"
        )));
    }
    Ok((2.0 * k_factor * MEAN_EARTH_RADIUS_M * height_m).sqrt())
}

/// Breakpoint distance 4 h_t h_r / lambda: the last constructive
/// crossover of the two-ray interference pattern. Beyond it the received
/// power decays monotonically.
pub fn breakpoint_distance_m(tx_height_m: f64, rx_height_m: f64, freq: Frequency) -> f64 {
    4.0 * tx_height_m * rx_height_m / freq.wavelength_m()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wifi() -> Frequency {
        Frequency::from_gigahertz(2.412).unwrap()
    }

    #[test]
    fn field_setup_geometry() {
        // 5 m mast to a ground sensor at 15 cm, 20 m out.
        let g = LinkGeometry::new(5.0, 0.15, 20.0).unwrap();
        let p = g.solve();
        assert!((p.los_length_m - 20.57966229071799).abs() < 1e-12);
        assert!((p.reflected_length_m - 20.652421165567972).abs() < 1e-12);
        assert!((p.incidence_angle_deg() - 14.439965121002714).abs() < 1e-9);
    }

    #[test]
    fn vertical_stack() {
        let g = LinkGeometry::new(3.0, 3.0, 0.0).unwrap();
        let p = g.solve();
        assert_eq!(p.los_length_m, 0.0);
        assert_eq!(p.reflected_length_m, 6.0);
        assert!((p.incidence_angle_deg() - 90.0).abs() < 1e-12);
    }

    #[test]
    fn paths_converge_at_large_distance() {
        let g = LinkGeometry::new(2.0, 2.0, 1e7).unwrap();
        let p = g.solve();
        let gap = p.reflected_length_m - p.los_length_m;
        assert!(gap >= 0.0);
        assert!(gap < 1e-5, "gap={gap}");
    }

    #[test]
    fn rejects_bad_geometry() {
        assert!(LinkGeometry::new(0.0, 1.0, 5.0).is_err());
        assert!(LinkGeometry::new(1.0, -0.5, 5.0).is_err());
        assert!(LinkGeometry::new(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn phase_difference_field_setup() {
        let g = LinkGeometry::new(5.0, 0.15, 20.0).unwrap();
        let dphi = g.phase_difference_rad(wifi());
        assert!((dphi - 3.6780907748501823).abs() < 1e-9, "dphi={dphi}");
    }

    #[test]
    fn one_wavelength_path_difference_gives_two_pi() {
        // With h_t = h_r = 1 m, the path difference sqrt(d^2+4)-d equals
        // lambda at d = (4 - lambda^2) / (2 lambda).
        let lambda = wifi().wavelength_m();
        let d = (4.0 - lambda * lambda) / (2.0 * lambda);
        let g = LinkGeometry::new(1.0, 1.0, d).unwrap();
        let dphi = g.phase_difference_rad(wifi());
        assert!((dphi - 2.0 * PI).abs() < 1e-9, "dphi={dphi}");
    }

    #[test]
    fn phase_difference_vanishes_far_out() {
        let g = LinkGeometry::new(1.0, 1.0, 1e8).unwrap();
        assert!(g.phase_difference_rad(wifi()) < 1e-4);
    }

    #[test]
    fn horizon_at_five_metres() {
        let h = radio_horizon_m(5.0, DEFAULT_K_FACTOR).unwrap();
        assert!((h - 9216.65159733548).abs() < 1e-6, "h={h}");
    }

    #[test]
    fn horizon_square_root_scaling() {
        let h5 = radio_horizon_m(5.0, DEFAULT_K_FACTOR).unwrap();
        let h20 = radio_horizon_m(20.0, DEFAULT_K_FACTOR).unwrap();
        assert!((h20 / h5 - 2.0).abs() < 1e-12);
        assert_eq!(radio_horizon_m(0.0, DEFAULT_K_FACTOR).unwrap(), 0.0);
        assert!(radio_horizon_m(-1.0, DEFAULT_K_FACTOR).is_err());
        assert!(radio_horizon_m(5.0, 0.0).is_err());
    }

    #[test]
    fn breakpoint_for_field_setup() {
        let d = breakpoint_distance_m(5.0, 0.15, wifi());
        assert!((d - 24.136697928538283).abs() < 1e-9, "d={d}");
    }
}
