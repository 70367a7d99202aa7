//! Antenna models: measured radiation-pattern cuts loaded from CSV,
//! the ideal half-wave dipole, and per-ray gain evaluation.

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::LinkGeometry;
use crate::reflection::Polarization;
use crate::units::db_to_linear;

/// Which plane a measured cut was taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternCut {
    /// xy-plane cut, indexed by azimuth.
    Azimuth,
    /// yz-plane cut, indexed by zenith angle (0 = straight up,
    /// 90 = horizontal).
    Elevation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternSample {
    pub angle_deg: f64,
    pub gain_dbi: f64,
}

/// One measured gain-versus-angle cut. Angles are strictly increasing in
/// [0, 360); lookups wrap modulo 360 and interpolate linearly in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiationPattern {
    samples: Vec<PatternSample>,
    cut: PatternCut,
    label: String,
    peak_gain_dbi: f64,
}

pub const PATTERN_CSV_HEADER: &str = "angle_deg,gain_dbi";

impl RadiationPattern {
    pub fn new(
        samples: Vec<PatternSample>,
        cut: PatternCut,
        label: impl Into<String>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::parse("no samples"));
        }
        if samples.len() < 4 {
            return Err(Error::parse(format!(
                "at least 4 samples required (got {})",
                samples.len()
            )));
        }
        let mut prev: Option<f64> = None;
        for s in &samples {
            if !s.angle_deg.is_finite() || s.angle_deg < 0.0 || s.angle_deg >= 360.0 {
                return Err(Error::parse(format!(
                    "angle {} out of range [0, 360)",
                    s.angle_deg
                )));
            }
            if !s.gain_dbi.is_finite() {
                return Err(Error::parse(format!(
                    "gain at {} degrees is not finite",
                    s.angle_deg
                )));
            }
            if let Some(p) = prev {
                if s.angle_deg == p {
                    return Err(Error::parse(format!("duplicate angle {p}")));
                }
                if s.angle_deg < p {
                    return Err(Error::parse("angles must be strictly increasing"));
                }
            }
            prev = Some(s.angle_deg);
        }
        let peak_gain_dbi = samples
            .iter()
            .map(|s| s.gain_dbi)
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            samples,
            cut,
            label: label.into(),
            peak_gain_dbi,
        })
    }

    /// Parse the CSV form: a `angle_deg,gain_dbi` header, one sample per
    /// row, `#` comment lines, UTF-8.
    pub fn parse_csv(text: &str, cut: PatternCut, label: impl Into<String>) -> Result<Self> {
        let mut samples = Vec::new();
        let mut header_seen = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !header_seen {
                if line != PATTERN_CSV_HEADER {
                    return Err(Error::parse_at(
                        line_no,
                        format!("expected header '{PATTERN_CSV_HEADER}'"),
                    ));
                }
                header_seen = true;
                continue;
            }
            let mut fields = line.split(',');
            let angle = fields.next().unwrap_or("").trim();
            let gain = fields.next().unwrap_or("").trim();
            if gain.is_empty() || fields.next().is_some() {
                return Err(Error::parse_at(
                    line_no,
                    format!("expected 'angle,gain' with two fields, got '{line}'"),
                ));
            }
            let angle_deg: f64 = angle
                .parse()
                .map_err(|_| Error::parse_at(line_no, format!("invalid angle '{angle}'")))?;
            let gain_dbi: f64 = gain
                .parse()
                .map_err(|_| Error::parse_at(line_no, format!("invalid gain '{gain}'")))?;
            samples.push(PatternSample {
                angle_deg,
                gain_dbi,
            });
        }
        if !header_seen && samples.is_empty() {
            return Err(Error::parse("no samples"));
        }
        Self::new(samples, cut, label)
    }

    pub fn load(path: &Path, cut: PatternCut) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self::parse_csv(&text, cut, label)
    }

    pub fn samples(&self) -> &[PatternSample] {
        &self.samples
    }

    pub fn cut(&self) -> PatternCut {
        self.cut
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn peak_gain_dbi(&self) -> f64 {
        self.peak_gain_dbi
    }

    /// Gain in dBi at an arbitrary angle: wraps modulo 360, returns the
    /// sample value exactly at sample angles, interpolates linearly in dB
    /// between neighbours (including across the 360 -> 0 seam).
    pub fn gain_dbi_at(&self, angle_deg: f64) -> f64 {
        let a = angle_deg.rem_euclid(360.0);
        match self
            .samples
            .binary_search_by(|s| s.angle_deg.partial_cmp(&a).unwrap())
        {
            Ok(i) => self.samples[i].gain_dbi,
            Err(i) => {
                let (lo, hi, span_a) = if i == 0 || i == self.samples.len() {
                    // Wrap segment from the last sample up through 360 to
                    // the first.
                    let lo = self.samples[self.samples.len() - 1];
                    let hi = self.samples[0];
                    let a_unwrapped = if a < lo.angle_deg { a + 360.0 } else { a };
                    (lo, hi, a_unwrapped - lo.angle_deg)
                } else {
                    let lo = self.samples[i - 1];
                    let hi = self.samples[i];
                    (lo, hi, a - lo.angle_deg)
                };
                let span = if hi.angle_deg > lo.angle_deg {
                    hi.angle_deg - lo.angle_deg
                } else {
                    hi.angle_deg + 360.0 - lo.angle_deg
                };
                let t = span_a / span;
                lo.gain_dbi + t * (hi.gain_dbi - lo.gain_dbi)
            }
        }
    }
}

/// What kind of antenna a model is.
#[derive(Debug, Clone, PartialEq)]
pub enum AntennaKind {
    /// Unit gain in every direction.
    Isotropic,
    /// Analytic half-wave dipole, peak 2.15 dBi broadside, null on the
    /// axis. Axis orientation follows the polarization: vertical puts the
    /// axis upright, horizontal lays it perpendicular to the link plane.
    IdealHalfWaveDipole,
    /// Measured cuts; gains are normalized so the pattern peak equals the
    /// model's `max_gain_dbi`.
    Measured {
        elevation_cut: RadiationPattern,
        azimuth_cut: Option<RadiationPattern>,
    },
}

/// Default peak gain for measured dipole patterns, in dBi.
pub const DEFAULT_MAX_GAIN_DBI: f64 = 1.97;

/// Linear peak gain of the ideal half-wave dipole (2.15 dBi).
pub const HALF_WAVE_DIPOLE_PEAK: f64 = 1.64;

#[derive(Debug, Clone, PartialEq)]
pub struct AntennaModel {
    kind: AntennaKind,
    max_gain_dbi: f64,
    polarization: Polarization,
}

impl AntennaModel {
    pub fn isotropic(polarization: Polarization) -> Self {
        Self {
            kind: AntennaKind::Isotropic,
            max_gain_dbi: 0.0,
            polarization,
        }
    }

    pub fn ideal_half_wave_dipole(polarization: Polarization) -> Self {
        Self {
            kind: AntennaKind::IdealHalfWaveDipole,
            max_gain_dbi: 10.0 * HALF_WAVE_DIPOLE_PEAK.log10(),
            polarization,
        }
    }

    pub fn measured(
        elevation_cut: RadiationPattern,
        azimuth_cut: Option<RadiationPattern>,
        max_gain_dbi: f64,
        polarization: Polarization,
    ) -> Self {
        Self {
            kind: AntennaKind::Measured {
                elevation_cut,
                azimuth_cut,
            },
            max_gain_dbi,
            polarization,
        }
    }

    pub fn kind(&self) -> &AntennaKind {
        &self.kind
    }

    pub fn polarization(&self) -> Polarization {
        self.polarization
    }

    pub fn max_gain_dbi(&self) -> f64 {
        self.max_gain_dbi
    }

    /// True when a horizontally polarized measured model has no azimuth
    /// cut and the lookup therefore assumes an omnidirectional azimuth
    /// plane. Callers may want to warn: a horizontal dipole is not
    /// azimuth-omnidirectional.
    pub fn assumes_omni_azimuth(&self) -> bool {
        matches!(
            (&self.kind, self.polarization),
            (
                AntennaKind::Measured {
                    azimuth_cut: None,
                    ..
                },
                Polarization::Horizontal
            )
        )
    }

    /// Linear gain toward a ray leaving (or arriving at) the antenna with
    /// the given elevation above the horizontal plane and azimuth around
    /// the vertical, both in degrees.
    pub fn gain_toward(&self, elevation_deg: f64, azimuth_deg: f64) -> f64 {
        match &self.kind {
            AntennaKind::Isotropic => 1.0,
            AntennaKind::IdealHalfWaveDipole => {
                ideal_dipole_gain(self.polarization, elevation_deg, azimuth_deg)
            }
            AntennaKind::Measured {
                elevation_cut,
                azimuth_cut,
            } => {
                let zenith = (90.0 - elevation_deg).rem_euclid(360.0);
                let mut gain_db = elevation_cut.gain_dbi_at(zenith) - elevation_cut.peak_gain_dbi();
                if let Some(az) = azimuth_cut {
                    gain_db += az.gain_dbi_at(azimuth_deg) - az.peak_gain_dbi();
                }
                db_to_linear(gain_db + self.max_gain_dbi)
            }
        }
    }
}

fn ideal_dipole_gain(polarization: Polarization, elevation_deg: f64, azimuth_deg: f64) -> f64 {
    let elevation = elevation_deg.to_radians();
    // Cosine of the angle between the ray and the dipole axis.
    let cos_axis = match polarization {
        Polarization::Vertical => elevation.sin(),
        Polarization::Horizontal => elevation.cos() * azimuth_deg.to_radians().sin(),
    };
    let sin_sq = 1.0 - cos_axis * cos_axis;
    if sin_sq < 1e-12 {
        return 0.0;
    }
    let lobe = (FRAC_PI_2 * cos_axis).cos();
    HALF_WAVE_DIPOLE_PEAK * lobe * lobe / sin_sq
}

/// Combined tx * rx linear gains along the direct and ground-reflected
/// rays.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayGains {
    pub g_los: f64,
    pub g_refl: f64,
}

/// Evaluate both antennas along each ray. The direct ray leaves the
/// transmitter at the elevation of the receiver and vice versa; the
/// reflected ray leaves and arrives pointing down at the reflection
/// point, at the grazing angle below horizontal. Both antennas face each
/// other in azimuth.
pub fn ray_gains(tx: &AntennaModel, rx: &AntennaModel, geom: &LinkGeometry) -> RayGains {
    let d = geom.horizontal_distance_m();
    let paths = geom.solve();
    let incidence_deg = paths.incidence_angle_rad.to_degrees();
    let tx_los_elev = (geom.rx_height_m() - geom.tx_height_m())
        .atan2(d)
        .to_degrees();
    let g_los = tx.gain_toward(tx_los_elev, 0.0) * rx.gain_toward(-tx_los_elev, 0.0);
    let g_refl = tx.gain_toward(-incidence_deg, 0.0) * rx.gain_toward(-incidence_deg, 0.0);
    RayGains { g_los, g_refl }
}
