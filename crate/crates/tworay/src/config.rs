//! JSON channel-configuration documents and their resolution into
//! runtime configs.
//!
//! Units in the document: frequencies in Hz, powers in dBm, lengths in
//! metres, conductivity in S/m. Measured antenna patterns are referenced
//! by file path, resolved relative to the document's directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::antenna::{AntennaModel, PatternCut, RadiationPattern, DEFAULT_MAX_GAIN_DBI};
use crate::budget::{ChannelConfig, LossChain, ModelKind};
use crate::error::{Error, Result};
use crate::ground::GroundProfile;
use crate::reflection::{GrazingSign, Polarization};
use crate::units::Frequency;

fn default_divergence() -> f64 {
    1.0
}

fn default_max_gain() -> f64 {
    DEFAULT_MAX_GAIN_DBI
}

/// Antenna description as it appears in a config document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AntennaDoc {
    pub kind: AntennaKindDoc,
    #[serde(default = "default_max_gain")]
    pub max_gain: f64,
    pub polarization: Polarization,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AntennaKindDoc {
    Isotropic,
    IdealHalfWaveDipole,
    Measured {
        elevation_cut: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        azimuth_cut: Option<String>,
    },
}

/// The serializable form of a [`ChannelConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    /// Carrier frequency in Hz.
    pub freq: f64,
    /// Transmit power in dBm.
    pub tx_power: f64,
    pub tx_losses: LossChain,
    pub rx_losses: LossChain,
    pub tx_antenna: AntennaDoc,
    pub rx_antenna: AntennaDoc,
    pub ground: GroundProfile,
    /// Transmitter height in metres.
    pub tx_height: f64,
    /// Receiver height in metres.
    pub rx_height: f64,
    /// Receiver sensitivity in dBm.
    pub sensitivity: f64,
    pub model: ModelKind,
    #[serde(default = "default_divergence")]
    pub divergence: f64,
    #[serde(default)]
    pub grazing_sign: GrazingSign,
}

impl ConfigDoc {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::parse_at(e.line().max(1), format!("invalid config JSON: {e}")))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    /// Validate every numeric field without touching the filesystem.
    /// Error messages name the offending field path.
    pub fn validate(&self) -> Result<()> {
        if !self.freq.is_finite() || self.freq <= 0.0 {
            return Err(Error::config(format!(
                "freq: must be a positive number of Hz (got {})",
                self.freq
            )));
        }
        for (path, antenna) in [
            ("tx_antenna", &self.tx_antenna),
            ("rx_antenna", &self.rx_antenna),
        ] {
            if !antenna.max_gain.is_finite() {
                return Err(Error::config(format!(
                    "{path}.max_gain: must be finite (got {})",
                    antenna.max_gain
                )));
            }
        }
        // The remaining numeric checks live on the runtime type; run them
        // against a pattern-free clone of this document.
        self.runtime_skeleton()?.validate()
    }

    /// Resolve the document into a runtime config, loading any measured
    /// pattern files relative to `base_dir`.
    pub fn resolve(&self, base_dir: Option<&Path>) -> Result<ChannelConfig> {
        self.validate()?;
        let mut cfg = self.runtime_skeleton()?;
        cfg.tx_antenna = resolve_antenna(&self.tx_antenna, "tx_antenna", base_dir)?;
        cfg.rx_antenna = resolve_antenna(&self.rx_antenna, "rx_antenna", base_dir)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Read a document from disk and resolve it; pattern paths are
    /// relative to the file's directory.
    pub fn load(path: &Path) -> Result<ChannelConfig> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let doc = Self::from_json_str(&text)?;
        doc.resolve(path.parent())
    }

    /// Runtime config with antennas downgraded to isotropic; used for
    /// validation before pattern files are loaded.
    fn runtime_skeleton(&self) -> Result<ChannelConfig> {
        Ok(ChannelConfig {
            freq: Frequency::from_hertz(self.freq)
                .map_err(|e| Error::config(format!("freq: {e}")))?,
            tx_power_dbm: self.tx_power,
            tx_losses: self.tx_losses.clone(),
            rx_losses: self.rx_losses.clone(),
            tx_antenna: AntennaModel::isotropic(self.tx_antenna.polarization),
            rx_antenna: AntennaModel::isotropic(self.rx_antenna.polarization),
            ground: self.ground,
            tx_height_m: self.tx_height,
            rx_height_m: self.rx_height,
            sensitivity_dbm: self.sensitivity,
            model: self.model,
            divergence: self.divergence,
            grazing_sign: self.grazing_sign,
        })
    }
}

fn resolve_antenna(doc: &AntennaDoc, field: &str, base_dir: Option<&Path>) -> Result<AntennaModel> {
    match &doc.kind {
        AntennaKindDoc::Isotropic => Ok(AntennaModel::isotropic(doc.polarization)),
        AntennaKindDoc::IdealHalfWaveDipole => {
            Ok(AntennaModel::ideal_half_wave_dipole(doc.polarization))
        }
        AntennaKindDoc::Measured {
            elevation_cut,
            azimuth_cut,
        } => {
            let elevation = load_cut(elevation_cut, PatternCut::Elevation, field, base_dir)?;
            let azimuth = azimuth_cut
                .as_ref()
                .map(|p| load_cut(p, PatternCut::Azimuth, field, base_dir))
                .transpose()?;
            Ok(AntennaModel::measured(
                elevation,
                azimuth,
                doc.max_gain,
                doc.polarization,
            ))
        }
    }
}

fn load_cut(
    path_str: &str,
    cut: PatternCut,
    field: &str,
    base_dir: Option<&Path>,
) -> Result<RadiationPattern> {
    let raw = PathBuf::from(path_str);
    let path = if raw.is_absolute() {
        raw
    } else {
        match base_dir {
            Some(dir) => dir.join(raw),
            None => raw,
        }
    };
    RadiationPattern::load(&path, cut).map_err(|e| {
        Error::config(format!(
            "{field}: pattern '{path_str}': {e}",
            path_str = path_str
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_json() -> String {
        r#"{
            "freq": 2412000000.0,
            "tx_power": 10.0,
            "tx_losses": { "side": "transmit", "entries": [] },
            "rx_losses": { "side": "receive", "entries": [] },
            "tx_antenna": { "kind": "isotropic", "polarization": "horizontal" },
            "rx_antenna": { "kind": "ideal_half_wave_dipole", "polarization": "horizontal" },
            "ground": { "relative_permittivity": 42.0, "conductivity": 0.0 },
            "tx_height": 5.0,
            "rx_height": 0.15,
            "sensitivity": -85.0,
            "model": "two_ray"
        }"#
        .to_string()
    }

    #[test]
    fn parses_and_resolves_minimal_config() {
        let doc = ConfigDoc::from_json_str(&minimal_json()).unwrap();
        assert_eq!(doc.divergence, 1.0);
        assert_eq!(doc.grazing_sign, GrazingSign::Verbatim);
        let cfg = doc.resolve(None).unwrap();
        assert_eq!(cfg.freq.hertz(), 2.412e9);
        assert_eq!(cfg.ground.roughness_stddev, 0.0);
        assert_eq!(cfg.model, ModelKind::TwoRay);
    }

    #[test]
    fn round_trips_through_json() {
        let doc = ConfigDoc::from_json_str(&minimal_json()).unwrap();
        let text = doc.to_json_string();
        let again = ConfigDoc::from_json_str(&text).unwrap();
        assert_eq!(doc, again);
    }

    #[test]
    fn validation_names_field_paths() {
        let mut doc = ConfigDoc::from_json_str(&minimal_json()).unwrap();
        doc.tx_height = -1.0;
        let err = doc.validate().unwrap_err();
        assert!(err.to_string().contains("tx_height"), "{err}");

        let mut doc = ConfigDoc::from_json_str(&minimal_json()).unwrap();
        doc.ground.relative_permittivity = 0.2;
        let err = doc.validate().unwrap_err();
        assert!(
            err.to_string().contains("ground.relative_permittivity"),
            "{err}"
        );

        let mut doc = ConfigDoc::from_json_str(&minimal_json()).unwrap();
        doc.tx_losses.entries.push(crate::budget::LossEntry {
            label: "divider".into(),
            loss_db: -7.1,
        });
        let err = doc.validate().unwrap_err();
        assert!(
            err.to_string().contains("tx_losses.entries[0].loss"),
            "{err}"
        );
    }

    #[test]
    fn swapped_loss_sides_rejected() {
        let text = minimal_json().replace("\"transmit\"", "\"receive\"");
        let doc = ConfigDoc::from_json_str(&text).unwrap();
        let err = doc.validate().unwrap_err();
        assert!(err.to_string().contains("tx_losses.side"), "{err}");
    }

    #[test]
    fn unknown_fields_rejected_with_location() {
        let text = minimal_json().replace("\"tx_power\"", "\"tx_powerr\"");
        let err = ConfigDoc::from_json_str(&text).unwrap_err();
        assert!(err.to_string().contains("tx_powerr"), "{err}");
    }

    #[test]
    fn missing_pattern_file_is_a_config_error() {
        let text = minimal_json().replace(
            r#""kind": "isotropic""#,
            r#""kind": { "measured": { "elevation_cut": "does-not-exist.csv" } }"#,
        );
        let doc = ConfigDoc::from_json_str(&text).unwrap();
        let err = doc.resolve(None).unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("tx_antenna") && msg.contains("does-not-exist.csv"),
            "{msg}"
        );
    }
}
