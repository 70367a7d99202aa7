//! Free-space path loss and the two-ray received-power equation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::LinkGeometry;
use crate::ground::{complex_permittivity, GroundProfile};
use crate::reflection::{
    reflection_coefficient, scattering_coefficient, GrazingSign, Polarization,
};
use crate::units::Frequency;

/// Free-space path loss in dB: 32.45 + 20 log10(d_km) + 20 log10(f_MHz).
/// Distance in metres and frequency in Hz are converted internally.
pub fn fspl_db(distance_m: f64, freq: Frequency) -> Result<f64> {
    if !distance_m.is_finite() || distance_m <= 0.0 {
        return Err(Error::domain(format!(
            "FSPL distance must be positive (got {distance_m} m)"
        )));
    }
    Ok(32.45 + 20.0 * (distance_m / 1000.0).log10() + 20.0 * freq.megahertz().log10())
}

/// Line-of-sight (Friis) received power alone: Pt G_l (lambda / 4 pi l)^2.
pub fn los_power_w(pt_w: f64, g_los: f64, los_length_m: f64, freq: Frequency) -> f64 {
    let amplitude = freq.wavelength_m() / (4.0 * PI * los_length_m);
    pt_w * g_los * amplitude * amplitude
}

/// Two-ray received power with the reflection described explicitly:
///
/// Pr = Pt (lambda / 4 pi)^2 | sqrt(G_l)/l +
///      rho_s D Gamma sqrt(G_r) e^(-j dphi) / (x + x') |^2
///
/// The squared bracket is the squared magnitude of the complex phasor
/// sum. Callers that want the physical ground model should use
/// [`two_ray_power`]; this entry point exists so the reflection can be
/// pinned (for instance Gamma = -1 or rho_s = 0) independently of any
/// ground description.
#[allow(clippy::too_many_arguments)]
pub fn two_ray_power_raw(
    pt_w: f64,
    geom: &LinkGeometry,
    freq: Frequency,
    gamma: Complex64,
    rho_s: f64,
    divergence: f64,
    g_los: f64,
    g_refl: f64,
) -> Result<f64> {
    if !pt_w.is_finite() || pt_w < 0.0 {
        return Err(Error::domain(format!(
            "transmit power must be >= 0 W (got {pt_w})"
        )));
    }
    if geom.horizontal_distance_m() <= 0.0 {
        return Err(Error::domain(
            "two-ray model is singular at zero horizontal distance".to_string(),
        ));
    }
    for (name, gain) in [("LOS gain", g_los), ("reflected gain", g_refl)] {
        if !gain.is_finite() || gain < 0.0 {
            return Err(Error::domain(format!("{name} must be >= 0 (got {gain})")));
        }
    }
    if !divergence.is_finite() || divergence < 0.0 {
        return Err(Error::domain(format!(
            "divergence factor must be >= 0 (got {divergence})"
        )));
    }
    if !rho_s.is_finite() || rho_s < 0.0 {
        return Err(Error::domain(format!(
            "scattering coefficient must be >= 0 (got {rho_s})"
        )));
    }

    let paths = geom.solve();
    let dphi = geom.phase_difference_rad(freq);
    let los = Complex64::new(g_los.sqrt() / paths.los_length_m, 0.0);
    let refl = gamma
        * Complex64::from_polar(1.0, -dphi)
        * (rho_s * divergence * g_refl.sqrt() / paths.reflected_length_m);
    let scale = freq.wavelength_m() / (4.0 * PI);
    Ok(pt_w * scale * scale * (los + refl).norm_sqr())
}

/// Two-ray received power over a physical ground: Gamma from the Fresnel
/// equations at the solved incidence angle, rho_s from the ground
/// roughness. `divergence` is 1 under the flat-earth assumption.
#[allow(clippy::too_many_arguments)]
pub fn two_ray_power(
    pt_w: f64,
    geom: &LinkGeometry,
    freq: Frequency,
    ground: &GroundProfile,
    polarization: Polarization,
    g_los: f64,
    g_refl: f64,
    divergence: f64,
    grazing_sign: GrazingSign,
) -> Result<f64> {
    if geom.horizontal_distance_m() <= 0.0 {
        return Err(Error::domain(
            "two-ray model is singular at zero horizontal distance".to_string(),
        ));
    }
    let paths = geom.solve();
    let eps = complex_permittivity(ground, freq);
    let gamma = reflection_coefficient(eps, paths.incidence_angle_rad, polarization, grazing_sign)?;
    let rho_s = scattering_coefficient(ground, paths.incidence_angle_rad, freq);
    two_ray_power_raw(pt_w, geom, freq, gamma, rho_s, divergence, g_los, g_refl)
}

/// Simplified two-ray bound: total reflection with phase inversion
/// (Gamma = -1), specular ground (rho_s = 1), flat earth (D = 1), unity
/// gains. Traces out the theoretical extremes of the received power.
pub fn two_ray_power_simplified(pt_w: f64, geom: &LinkGeometry, freq: Frequency) -> Result<f64> {
    two_ray_power_raw(
        pt_w,
        geom,
        freq,
        Complex64::new(-1.0, 0.0),
        1.0,
        1.0,
        1.0,
        1.0,
    )
}
