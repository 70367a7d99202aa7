//! Field-measurement ingestion, model-versus-measurement error curves
//! with interference/diffraction zone statistics, and soil-permittivity
//! calibration.

use std::fs;
use std::path::Path;

use serde_json::json;

use crate::budget::{predict_rss_with_model, ChannelConfig, ModelKind};
use crate::error::{Error, Result};
use crate::geometry::LinkGeometry;
use crate::reflection::Polarization;
use crate::units::{format_sig6, Frequency};

/// Zone boundary splitting the interference zone from the diffraction
/// zone, in metres.
pub const DEFAULT_ZONE_BOUNDARY_M: f64 = 20.0;

/// Frequency agreement required between a measurement set and a config.
pub const FREQ_MATCH_TOLERANCE_HZ: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSample {
    pub distance_m: f64,
    pub rss_dbm: f64,
}

/// Metadata carried by a measurement file through `#` directives
/// (`# freq_hz: ...`, `# polarization: ...`, `# site: ...`). Fields stay
/// unset when the file does not declare them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MeasurementMeta {
    pub polarization: Option<Polarization>,
    pub site: String,
    pub freq: Option<Frequency>,
}

/// Field measurements: RSS versus distance, strictly increasing in
/// distance.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    pub samples: Vec<MeasurementSample>,
    pub metadata: MeasurementMeta,
}

pub const MEASUREMENT_CSV_HEADER: &str = "distance_m,rss_dbm";

/// Parse the measurement CSV form: header `distance_m,rss_dbm`, one
/// sample per row, `#` comments. Comment lines of the form
/// `# key: value` set metadata for keys `freq_hz`, `polarization`, and
/// `site`.
pub fn parse_measurements_csv(text: &str) -> Result<MeasurementSet> {
    let mut samples: Vec<MeasurementSample> = Vec::new();
    let mut metadata = MeasurementMeta::default();
    let mut header_seen = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once(':') {
                let value = value.trim();
                match key.trim() {
                    "freq_hz" => {
                        let hz: f64 = value.parse().map_err(|_| {
                            Error::parse_at(line_no, format!("invalid freq_hz '{value}'"))
                        })?;
                        metadata.freq = Some(Frequency::from_hertz(hz).map_err(|e| {
                            Error::parse_at(line_no, format!("invalid freq_hz: {e}"))
                        })?);
                    }
                    "polarization" => {
                        metadata.polarization = Some(match value {
                            "vertical" => Polarization::Vertical,
                            "horizontal" => Polarization::Horizontal,
                            other => {
                                return Err(Error::parse_at(
                                    line_no,
                                    format!("invalid polarization '{other}'"),
                                ))
                            }
                        });
                    }
                    "site" => metadata.site = value.to_string(),
                    _ => {}
                }
            }
            continue;
        }
        if !header_seen {
            if line != MEASUREMENT_CSV_HEADER {
                return Err(Error::parse_at(
                    line_no,
                    format!("expected header '{MEASUREMENT_CSV_HEADER}'"),
                ));
            }
            header_seen = true;
            continue;
        }
        let mut fields = line.split(',');
        let distance = fields.next().unwrap_or("").trim();
        let rss = fields.next().unwrap_or("").trim();
        if rss.is_empty() || fields.next().is_some() {
            return Err(Error::parse_at(
                line_no,
                format!("expected 'distance,rss' with two fields, got '{line}'"),
            ));
        }
        let distance_m: f64 = distance
            .parse()
            .map_err(|_| Error::parse_at(line_no, format!("invalid distance '{distance}'")))?;
        let rss_dbm: f64 = rss
            .parse()
            .map_err(|_| Error::parse_at(line_no, format!("invalid rss '{rss}'")))?;
        if !distance_m.is_finite() || distance_m <= 0.0 {
            return Err(Error::parse_at(
                line_no,
                format!("distance must be positive (got {distance_m})"),
            ));
        }
        if !rss_dbm.is_finite() {
            return Err(Error::parse_at(line_no, "rss must be finite".to_string()));
        }
        if let Some(last) = samples.last() {
            if distance_m == last.distance_m {
                return Err(Error::parse_at(
                    line_no,
                    format!("duplicate distance {distance_m}"),
                ));
            }
            if distance_m < last.distance_m {
                return Err(Error::parse_at(
                    line_no,
                    "distances must be strictly increasing".to_string(),
                ));
            }
        }
        samples.push(MeasurementSample {
            distance_m,
            rss_dbm,
        });
    }
    if !header_seen {
        return Err(Error::parse(format!(
            "missing header '{MEASUREMENT_CSV_HEADER}'"
        )));
    }
    Ok(MeasurementSet { samples, metadata })
}

pub fn load_measurements(path: &Path) -> Result<MeasurementSet> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_measurements_csv(&text)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSample {
    pub distance_m: f64,
    /// measured - predicted, in dB; positive means the model
    /// underpredicts.
    pub error_db: f64,
}

/// Per-sample error curve plus zone-split RMSE statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub per_sample: Vec<ErrorSample>,
    pub rmse_total_db: f64,
    pub rmse_interference_zone_db: f64,
    pub rmse_diffraction_zone_db: f64,
    pub zone_boundary_m: f64,
    pub interference_count: usize,
    pub diffraction_count: usize,
}

impl ErrorReport {
    /// Per-sample CSV with header `distance_m,error_db`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("distance_m,error_db\n");
        for s in &self.per_sample {
            out.push_str(&format_sig6(s.distance_m));
            out.push(',');
            out.push_str(&format_sig6(s.error_db));
            out.push('\n');
        }
        out
    }

    /// JSON summary without the per-sample curve.
    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&json!({
            "rmse_total_db": self.rmse_total_db,
            "rmse_interference_zone_db": self.rmse_interference_zone_db,
            "rmse_diffraction_zone_db": self.rmse_diffraction_zone_db,
            "zone_boundary_m": self.zone_boundary_m,
            "samples": self.per_sample.len(),
            "interference_samples": self.interference_count,
            "diffraction_samples": self.diffraction_count,
        }))
        .expect("summary serialization cannot fail")
    }
}

fn rmse(errors: &[f64]) -> f64 {
    if errors.is_empty() {
        return 0.0;
    }
    (errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64).sqrt()
}

/// Evaluate the model exactly at each measured distance and report
/// measured - predicted errors, with RMSE overall and per zone. Samples
/// at distances below `zone_boundary_m` fall in the interference zone,
/// the rest in the diffraction zone.
pub fn error_curve(
    meas: &MeasurementSet,
    cfg: &ChannelConfig,
    model: ModelKind,
    zone_boundary_m: f64,
) -> Result<ErrorReport> {
    if meas.samples.is_empty() {
        return Err(Error::domain("empty measurement set".to_string()));
    }
    if !zone_boundary_m.is_finite() || zone_boundary_m <= 0.0 {
        return Err(Error::domain(format!(
            "zone boundary must be positive (got {zone_boundary_m} m)"
        )));
    }
    if let Some(meas_freq) = meas.metadata.freq {
        let delta = (meas_freq.hertz() - cfg.freq.hertz()).abs();
        if delta > FREQ_MATCH_TOLERANCE_HZ {
            return Err(Error::domain(format!(
                "measurement frequency {} Hz does not match config frequency {} Hz (tolerance {} Hz)",
                meas_freq.hertz(),
                cfg.freq.hertz(),
                FREQ_MATCH_TOLERANCE_HZ
            )));
        }
    }
    cfg.validate()?;

    let mut per_sample = Vec::with_capacity(meas.samples.len());
    let mut interference = Vec::new();
    let mut diffraction = Vec::new();
    for s in &meas.samples {
        let geom = LinkGeometry::new(cfg.tx_height_m, cfg.rx_height_m, s.distance_m)?;
        let predicted = predict_rss_with_model(cfg, &geom, model)?;
        let error_db = s.rss_dbm - predicted.rss_dbm;
        per_sample.push(ErrorSample {
            distance_m: s.distance_m,
            error_db,
        });
        if s.distance_m < zone_boundary_m {
            interference.push(error_db);
        } else {
            diffraction.push(error_db);
        }
    }
    let all: Vec<f64> = per_sample.iter().map(|s| s.error_db).collect();
    Ok(ErrorReport {
        rmse_total_db: rmse(&all),
        rmse_interference_zone_db: rmse(&interference),
        rmse_diffraction_zone_db: rmse(&diffraction),
        zone_boundary_m,
        interference_count: interference.len(),
        diffraction_count: diffraction.len(),
        per_sample,
    })
}

/// Calibration outcome: the best grid point, its RMSE, and the whole
/// profile for inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationResult {
    pub best_eps_r: f64,
    pub rmse_db: f64,
    /// (eps_r, rmse_db) at every grid point, in grid order.
    pub profile: Vec<(f64, f64)>,
}

impl CalibrationResult {
    /// Profile CSV with header `eps_r,rmse_db`.
    pub fn profile_csv(&self) -> String {
        let mut out = String::from("eps_r,rmse_db\n");
        for (eps, rmse) in &self.profile {
            out.push_str(&format_sig6(*eps));
            out.push(',');
            out.push_str(&format_sig6(*rmse));
            out.push('\n');
        }
        out
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&json!({
            "best_eps_r": self.best_eps_r,
            "rmse_db": self.rmse_db,
            "grid_points": self.profile.len(),
        }))
        .expect("summary serialization cannot fail")
    }
}

/// Grid search over the soil relative permittivity, minimizing the total
/// RMSE of the two-ray model against the measurements. Conductivity and
/// roughness stay fixed at the config's values. Ties break toward the
/// smaller permittivity.
pub fn calibrate_permittivity(
    meas: &MeasurementSet,
    cfg: &ChannelConfig,
    eps_range: (f64, f64),
    steps: usize,
) -> Result<CalibrationResult> {
    let (lo, hi) = eps_range;
    if !lo.is_finite() || !hi.is_finite() || lo < 1.0 || hi <= lo {
        return Err(Error::domain(format!(
            "invalid permittivity range: need 1 <= lo < hi (got lo={lo}, hi={hi})"
        )));
    }
    if steps < 2 {
        return Err(Error::domain(format!(
            "calibration grid needs at least 2 points (got {steps})"
        )));
    }
    let mut profile = Vec::with_capacity(steps);
    let mut best: Option<(f64, f64)> = None;
    for i in 0..steps {
        let eps = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
        let mut candidate = cfg.clone();
        candidate.ground.relative_permittivity = eps;
        let report = error_curve(meas, &candidate, ModelKind::TwoRay, DEFAULT_ZONE_BOUNDARY_M)?;
        let rmse = report.rmse_total_db;
        profile.push((eps, rmse));
        let better = match best {
            None => true,
            Some((_, best_rmse)) => rmse < best_rmse,
        };
        if better {
            best = Some((eps, rmse));
        }
    }
    let (best_eps_r, rmse_db) = best.expect("grid has at least two points");
    Ok(CalibrationResult {
        best_eps_r,
        rmse_db,
        profile,
    })
}
