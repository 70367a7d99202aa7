//! Carrier frequency, power-unit conversions, and deterministic number
//! formatting for output files.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Carrier frequency. Always finite and strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Frequency {
    hertz: f64,
}

impl Frequency {
    pub fn from_hertz(hertz: f64) -> Result<Self> {
        if !hertz.is_finite() || hertz <= 0.0 {
            return Err(Error::domain(format!(
                "frequency must be a positive, finite number of Hz (got {hertz})"
            )));
        }
        Ok(Self { hertz })
    }

    pub fn from_megahertz(megahertz: f64) -> Result<Self> {
        Self::from_hertz(megahertz * 1e6)
    }

    pub fn from_gigahertz(gigahertz: f64) -> Result<Self> {
        Self::from_hertz(gigahertz * 1e9)
    }

    pub fn hertz(self) -> f64 {
        self.hertz
    }

    pub fn megahertz(self) -> f64 {
        self.hertz / 1e6
    }

    /// Free-space wavelength in metres.
    pub fn wavelength_m(self) -> f64 {
        SPEED_OF_LIGHT_M_S / self.hertz
    }
}

impl Serialize for Frequency {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.hertz.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Frequency {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let hertz = f64::deserialize(deserializer)?;
        Frequency::from_hertz(hertz).map_err(serde::de::Error::custom)
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * (watts * 1e3).log10()
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Format a value rounded to six significant digits, without trailing
/// zeros, so repeated runs emit byte-identical text.
pub fn format_sig6(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let rounded: f64 = format!("{value:.5e}")
        .parse()
        .expect("scientific form parses");
    let magnitude = rounded.abs();
    if !(1e-9..1e15).contains(&magnitude) {
        let sci = format!("{rounded:.5e}");
        let (mantissa, exp) = sci
            .split_once('e')
            .expect("scientific form has an exponent");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{mantissa}e{exp}");
    }
    format!("{rounded}")
}
