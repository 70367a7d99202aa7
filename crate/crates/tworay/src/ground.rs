//! Ground electromagnetic description and the complex soil permittivity.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::Frequency;

/// Electromagnetic description of the reflecting ground.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundProfile {
    /// Relative permittivity of the soil, dimensionless, >= 1.
    pub relative_permittivity: f64,
    /// Soil conductivity in S/m, >= 0.
    pub conductivity: f64,
    /// Standard deviation of ground heights in metres, >= 0.
    #[serde(default)]
    pub roughness_stddev: f64,
}

impl GroundProfile {
    pub fn new(
        relative_permittivity: f64,
        conductivity: f64,
        roughness_stddev: f64,
    ) -> Result<Self> {
        let profile = Self {
            relative_permittivity,
            conductivity,
            roughness_stddev,
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.relative_permittivity.is_finite() || self.relative_permittivity < 1.0 {
            return Err(Error::domain(format!(
                "relative_permittivity: must be >= 1 (got {})",
                self.relative_permittivity
            )));
        }
        if !self.conductivity.is_finite() || self.conductivity < 0.0 {
            return Err(Error::domain(format!(
                "conductivity: must be >= 0 S/m (got {})",
                self.conductivity
            )));
        }
        if !self.roughness_stddev.is_finite() || self.roughness_stddev < 0.0 {
            return Err(Error::domain(format!(
                "roughness_stddev: must be >= 0 m (got {})",
                self.roughness_stddev
            )));
        }
        Ok(())
    }

    /// Named ground presets: `grass-42`, `concrete-1.7`, `omnet-15`.
    /// All three ship with zero conductivity and smooth ground.
    pub fn preset(name: &str) -> Option<GroundProfile> {
        let relative_permittivity = match name {
            "grass-42" => 42.0,
            "concrete-1.7" => 1.7,
            "omnet-15" => 15.0,
            _ => return None,
        };
        Some(GroundProfile {
            relative_permittivity,
            conductivity: 0.0,
            roughness_stddev: 0.0,
        })
    }

    pub fn preset_names() -> &'static [&'static str] {
        &["grass-42", "concrete-1.7", "omnet-15"]
    }
}

/// Complex relative permittivity of the ground. The imaginary part is
/// never positive: conductivity only adds loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPermittivity(Complex64);

impl ComplexPermittivity {
    pub fn new(real: f64, imag: f64) -> Result<Self> {
        if !real.is_finite() || !imag.is_finite() {
            return Err(Error::domain(format!(
                "complex permittivity must be finite (got {real} + j{imag})"
            )));
        }
        if imag > 0.0 {
            return Err(Error::domain(format!(
                "complex permittivity imaginary part must be <= 0 (got {imag})"
            )));
        }
        Ok(Self(Complex64::new(real, imag)))
    }

    pub fn as_complex(self) -> Complex64 {
        self.0
    }

    pub fn real(self) -> f64 {
        self.0.re
    }

    pub fn imag(self) -> f64 {
        self.0.im
    }
}

/// eps_g = eps_r - j 60 sigma lambda0, with lambda0 the free-space
/// wavelength.
pub fn complex_permittivity(ground: &GroundProfile, freq: Frequency) -> ComplexPermittivity {
    debug_assert!(ground.validate().is_ok());
    let lambda0 = freq.wavelength_m();
    ComplexPermittivity(Complex64::new(
        ground.relative_permittivity,
        -60.0 * ground.conductivity * lambda0,
    ))
}
