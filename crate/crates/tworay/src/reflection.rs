//! Fresnel reflection coefficients for a lossy ground, polarization
//! dispatch, and the rough-ground scattering coefficient.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::{ComplexPermittivity, GroundProfile};
use crate::units::Frequency;

/// Antenna / wave polarization. Vertical selects the parallel coefficient,
/// horizontal the perpendicular one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarization {
    Vertical,
    Horizontal,
}

/// Sign convention for the parallel reflection coefficient.
///
/// `Verbatim` keeps the form whose grazing limit is +1. `Textbook`
/// negates it, recovering the common convention where both polarizations
/// tend to -1 at grazing incidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrazingSign {
    #[default]
    Verbatim,
    Textbook,
}

fn check_incidence(theta_i_rad: f64) -> Result<()> {
    // Grazing angle measured from the ground plane, in (0, 90] degrees.
    if !theta_i_rad.is_finite() || theta_i_rad <= 0.0 || theta_i_rad > FRAC_PI_2 {
        return Err(Error::domain(format!(
            "incidence angle must lie in (0, 90] degrees (got {} degrees)",
            theta_i_rad.to_degrees()
        )));
    }
    Ok(())
}

/// Parallel (vertical-polarization) reflection coefficient:
/// (-eps sin(theta) + sqrt(eps - cos^2(theta))) /
/// ( eps sin(theta) + sqrt(eps - cos^2(theta))).
///
/// The complex square root takes the branch with non-negative real part,
/// which for a lossy ground also has a non-positive imaginary part.
pub fn fresnel_parallel(eps_g: ComplexPermittivity, theta_i_rad: f64) -> Result<Complex64> {
    check_incidence(theta_i_rad)?;
    let eps = eps_g.as_complex();
    let (sin_t, cos_t) = theta_i_rad.sin_cos();
    let root = (eps - Complex64::new(cos_t * cos_t, 0.0)).sqrt();
    Ok((-eps * sin_t + root) / (eps * sin_t + root))
}

/// Perpendicular (horizontal-polarization) reflection coefficient:
/// (sin(theta) - sqrt(eps - cos^2(theta))) /
/// (sin(theta) + sqrt(eps - cos^2(theta))).
pub fn fresnel_perpendicular(eps_g: ComplexPermittivity, theta_i_rad: f64) -> Result<Complex64> {
    check_incidence(theta_i_rad)?;
    let eps = eps_g.as_complex();
    let (sin_t, cos_t) = theta_i_rad.sin_cos();
    let root = (eps - Complex64::new(cos_t * cos_t, 0.0)).sqrt();
    let sin_c = Complex64::new(sin_t, 0.0);
    Ok((sin_c - root) / (sin_c + root))
}

/// Reflection coefficient for the given polarization and sign convention.
pub fn reflection_coefficient(
    eps_g: ComplexPermittivity,
    theta_i_rad: f64,
    polarization: Polarization,
    sign: GrazingSign,
) -> Result<Complex64> {
    match polarization {
        Polarization::Vertical => {
            let gamma = fresnel_parallel(eps_g, theta_i_rad)?;
            Ok(match sign {
                GrazingSign::Verbatim => gamma,
                GrazingSign::Textbook => -gamma,
            })
        }
        Polarization::Horizontal => fresnel_perpendicular(eps_g, theta_i_rad),
    }
}

/// Specular scattering coefficient of a rough ground:
/// rho_s = exp(-0.5 (4 pi dh cos(theta) / lambda)^2), in (0, 1].
/// Smooth ground (dh = 0) reflects specularly with rho_s = 1.
pub fn scattering_coefficient(ground: &GroundProfile, theta_i_rad: f64, freq: Frequency) -> f64 {
    let dphi1 = 4.0 * PI * ground.roughness_stddev * theta_i_rad.cos() / freq.wavelength_m();
    (-0.5 * dphi1 * dphi1).exp()
}
