//! Link-budget composition: transmit power, loss chains, channel model
//! selection, distance sweeps, trajectory prediction, and connectivity
//! summaries.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::antenna::{ray_gains, AntennaModel};
use crate::error::{Error, Result};
use crate::geometry::{radio_horizon_m, LinkGeometry, DEFAULT_K_FACTOR};
use crate::ground::GroundProfile;
use crate::propagation::{fspl_db, two_ray_power, two_ray_power_raw};
use crate::reflection::GrazingSign;
use crate::units::{format_sig6, linear_to_db, Frequency};

/// Default smallest usable horizontal distance; sweeps start here and
/// overhead trajectory samples are clamped to it.
pub const DEFAULT_MIN_DISTANCE_M: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossSide {
    Transmit,
    Receive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossEntry {
    pub label: String,
    #[serde(rename = "loss")]
    pub loss_db: f64,
}

/// An ordered chain of fixed losses on one side of the link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossChain {
    pub side: LossSide,
    pub entries: Vec<LossEntry>,
}

impl LossChain {
    pub fn empty(side: LossSide) -> Self {
        Self {
            side,
            entries: Vec::new(),
        }
    }

    pub fn total_db(&self) -> f64 {
        self.entries.iter().map(|e| e.loss_db).sum()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, entry) in self.entries.iter().enumerate() {
            if !entry.loss_db.is_finite() || entry.loss_db < 0.0 {
                return Err(Error::domain(format!(
                    "entries[{i}].loss: must be >= 0 dB (got {} for '{}')",
                    entry.loss_db, entry.label
                )));
            }
        }
        Ok(())
    }
}

/// Which propagation model predicts the received power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Fspl,
    TwoRay,
    TwoRaySimplified,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [
        ModelKind::Fspl,
        ModelKind::TwoRay,
        ModelKind::TwoRaySimplified,
    ];

    /// Column name used in trace CSV output.
    pub fn column_name(self) -> &'static str {
        match self {
            ModelKind::Fspl => "rss_fspl_dbm",
            ModelKind::TwoRay => "rss_tworay_dbm",
            ModelKind::TwoRaySimplified => "rss_simplified_dbm",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "fspl" => Ok(ModelKind::Fspl),
            "two_ray" => Ok(ModelKind::TwoRay),
            "two_ray_simplified" => Ok(ModelKind::TwoRaySimplified),
            other => Err(Error::domain(format!(
                "unknown model '{other}' (expected fspl, two_ray, or two_ray_simplified)"
            ))),
        }
    }
}

/// Everything needed to predict received power on a link.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelConfig {
    pub freq: Frequency,
    pub tx_power_dbm: f64,
    pub tx_losses: LossChain,
    pub rx_losses: LossChain,
    pub tx_antenna: AntennaModel,
    pub rx_antenna: AntennaModel,
    pub ground: GroundProfile,
    pub tx_height_m: f64,
    pub rx_height_m: f64,
    pub sensitivity_dbm: f64,
    pub model: ModelKind,
    pub divergence: f64,
    pub grazing_sign: GrazingSign,
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.tx_power_dbm.is_finite() {
            return Err(Error::config(format!(
                "tx_power: must be finite (got {})",
                self.tx_power_dbm
            )));
        }
        if !self.sensitivity_dbm.is_finite() {
            return Err(Error::config(format!(
                "sensitivity: must be finite (got {})",
                self.sensitivity_dbm
            )));
        }
        for (name, h) in [
            ("tx_height", self.tx_height_m),
            ("rx_height", self.rx_height_m),
        ] {
            if !h.is_finite() || h <= 0.0 {
                return Err(Error::config(format!("{name}: must be positive (got {h})")));
            }
        }
        if !self.divergence.is_finite() || self.divergence < 0.0 {
            return Err(Error::config(format!(
                "divergence: must be >= 0 (got {})",
                self.divergence
            )));
        }
        self.ground
            .validate()
            .map_err(|e| Error::config(format!("ground.{e}")))?;
        if self.tx_losses.side != LossSide::Transmit {
            return Err(Error::config(
                "tx_losses.side: must be \"transmit\"".to_string(),
            ));
        }
        if self.rx_losses.side != LossSide::Receive {
            return Err(Error::config(
                "rx_losses.side: must be \"receive\"".to_string(),
            ));
        }
        self.tx_losses
            .validate()
            .map_err(|e| Error::config(format!("tx_losses.{e}")))?;
        self.rx_losses
            .validate()
            .map_err(|e| Error::config(format!("rx_losses.{e}")))?;
        Ok(())
    }

    /// Geometry for the configured heights at a horizontal distance.
    pub fn geometry_at(&self, distance_m: f64) -> Result<LinkGeometry> {
        LinkGeometry::new(self.tx_height_m, self.rx_height_m, distance_m)
    }
}

/// One predicted sample of received signal strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RssSample {
    pub distance_m: f64,
    pub rss_dbm: f64,
    pub margin_db: f64,
    pub connected: bool,
    /// False when the link distance reaches beyond the radio horizon of
    /// the higher antenna, where the flat-earth geometry stops being
    /// trustworthy.
    pub flat_earth_valid: bool,
    /// True when an overhead trajectory sample was clamped up to the
    /// minimum usable distance.
    pub clamped: bool,
}

/// A sequence of predicted samples for one model.
#[derive(Debug, Clone, PartialEq)]
pub struct RssTrace {
    pub model: ModelKind,
    pub samples: Vec<RssSample>,
}

/// Predict received power with the model selected in the config.
pub fn predict_rss(cfg: &ChannelConfig, geom: &LinkGeometry) -> Result<RssSample> {
    predict_rss_with_model(cfg, geom, cfg.model)
}

/// Predict received power with an explicit model choice.
///
/// rss = tx_power - tx_losses + 10 log10(Pr/Pt) - rx_losses, where Pr/Pt
/// comes from the selected model with the per-ray antenna gains folded
/// in. The FSPL model runs over the line-of-sight path length with the
/// LOS gains applied; the simplified model fixes unity gains.
pub fn predict_rss_with_model(
    cfg: &ChannelConfig,
    geom: &LinkGeometry,
    model: ModelKind,
) -> Result<RssSample> {
    let distance_m = geom.horizontal_distance_m();
    if distance_m <= 0.0 {
        return Err(Error::domain(format!(
            "prediction requires a positive horizontal distance (got {distance_m} m)"
        )));
    }
    let gains = ray_gains(&cfg.tx_antenna, &cfg.rx_antenna, geom);
    let paths = geom.solve();
    let ratio_db = match model {
        ModelKind::Fspl => linear_to_db(gains.g_los) - fspl_db(paths.los_length_m, cfg.freq)?,
        ModelKind::TwoRay => linear_to_db(two_ray_power(
            1.0,
            geom,
            cfg.freq,
            &cfg.ground,
            cfg.tx_antenna.polarization(),
            gains.g_los,
            gains.g_refl,
            cfg.divergence,
            cfg.grazing_sign,
        )?),
        ModelKind::TwoRaySimplified => linear_to_db(two_ray_power_raw(
            1.0,
            geom,
            cfg.freq,
            Complex64::new(-1.0, 0.0),
            1.0,
            1.0,
            1.0,
            1.0,
        )?),
    };
    let rss_dbm = cfg.tx_power_dbm - cfg.tx_losses.total_db() + ratio_db - cfg.rx_losses.total_db();
    let margin_db = rss_dbm - cfg.sensitivity_dbm;
    let higher = geom.tx_height_m().max(geom.rx_height_m());
    let horizon = radio_horizon_m(higher, DEFAULT_K_FACTOR)?;
    Ok(RssSample {
        distance_m,
        rss_dbm,
        margin_db,
        connected: margin_db >= 0.0,
        flat_earth_valid: distance_m < horizon,
        clamped: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepSpacing {
    Linear,
    Log,
}

/// Predict received power over evenly spaced distances, one trace per
/// requested model. All traces share the same distance grid.
pub fn sweep(
    cfg: &ChannelConfig,
    d_min_m: f64,
    d_max_m: f64,
    steps: usize,
    models: &[ModelKind],
    spacing: SweepSpacing,
) -> Result<Vec<RssTrace>> {
    if !d_min_m.is_finite() || !d_max_m.is_finite() || d_min_m <= 0.0 || d_max_m <= d_min_m {
        return Err(Error::domain(format!(
            "invalid sweep range: need 0 < d_min < d_max (got d_min={d_min_m}, d_max={d_max_m})"
        )));
    }
    if steps < 2 {
        return Err(Error::domain(format!(
            "sweep needs at least 2 steps (got {steps})"
        )));
    }
    if models.is_empty() {
        return Err(Error::domain("no models requested".to_string()));
    }
    cfg.validate()?;

    let distances: Vec<f64> = (0..steps)
        .map(|i| {
            let t = i as f64 / (steps - 1) as f64;
            match spacing {
                SweepSpacing::Linear => d_min_m + t * (d_max_m - d_min_m),
                SweepSpacing::Log => (d_min_m.ln() + t * (d_max_m.ln() - d_min_m.ln())).exp(),
            }
        })
        .collect();

    let mut traces = Vec::with_capacity(models.len());
    for &model in models {
        let mut samples = Vec::with_capacity(distances.len());
        for &d in &distances {
            let geom = cfg.geometry_at(d)?;
            samples.push(predict_rss_with_model(cfg, &geom, model)?);
        }
        traces.push(RssTrace { model, samples });
    }
    Ok(traces)
}

/// A 3-D waypoint in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waypoint {
    pub x_m: f64,
    pub y_m: f64,
    pub z_m: f64,
}

pub const WAYPOINTS_CSV_HEADER: &str = "x_m,y_m,z_m";

/// Parse a waypoint CSV: header `x_m,y_m,z_m`, one waypoint per row,
/// `#` comments.
pub fn parse_waypoints_csv(text: &str) -> Result<Vec<Waypoint>> {
    let mut waypoints = Vec::new();
    let mut header_seen = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header_seen {
            if line != WAYPOINTS_CSV_HEADER {
                return Err(Error::parse_at(
                    line_no,
                    format!("expected header '{WAYPOINTS_CSV_HEADER}'"),
                ));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::parse_at(
                line_no,
                format!("expected 3 fields 'x,y,z', got {}", fields.len()),
            ));
        }
        let mut values = [0.0f64; 3];
        for (slot, field) in values.iter_mut().zip(&fields) {
            *slot = field
                .parse()
                .map_err(|_| Error::parse_at(line_no, format!("invalid number '{field}'")))?;
            if !slot.is_finite() {
                return Err(Error::parse_at(
                    line_no,
                    format!("non-finite value '{field}'"),
                ));
            }
        }
        waypoints.push(Waypoint {
            x_m: values[0],
            y_m: values[1],
            z_m: values[2],
        });
    }
    if !header_seen {
        return Err(Error::parse(format!(
            "missing header '{WAYPOINTS_CSV_HEADER}'"
        )));
    }
    Ok(waypoints)
}

pub fn load_waypoints(path: &Path) -> Result<Vec<Waypoint>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_waypoints_csv(&text)
}

/// Predict received power along a waypoint trajectory against a fixed
/// ground sensor, using the config's model. Each waypoint maps to a
/// link with h_t = waypoint altitude, h_r = sensor altitude, d =
/// horizontal separation. Samples closer than `min_distance_m` are
/// clamped to it and flagged.
pub fn trajectory_rss(
    cfg: &ChannelConfig,
    waypoints: &[Waypoint],
    sensor: Waypoint,
    min_distance_m: f64,
) -> Result<RssTrace> {
    if !sensor.z_m.is_finite() || sensor.z_m <= 0.0 {
        return Err(Error::domain(format!(
            "sensor altitude must be positive (got {} m)",
            sensor.z_m
        )));
    }
    if !min_distance_m.is_finite() || min_distance_m <= 0.0 {
        return Err(Error::domain(format!(
            "minimum distance must be positive (got {min_distance_m} m)"
        )));
    }
    cfg.validate()?;
    let mut samples = Vec::with_capacity(waypoints.len());
    for (i, wp) in waypoints.iter().enumerate() {
        if !wp.z_m.is_finite() || wp.z_m <= 0.0 {
            return Err(Error::domain(format!(
                "waypoint {i}: altitude must be positive (got {} m)",
                wp.z_m
            )));
        }
        let d = f64::hypot(wp.x_m - sensor.x_m, wp.y_m - sensor.y_m);
        let clamped = d < min_distance_m;
        let d_eff = if clamped { min_distance_m } else { d };
        let geom = LinkGeometry::new(wp.z_m, sensor.z_m, d_eff)?;
        let mut sample = predict_rss(cfg, &geom)?;
        sample.clamped = clamped;
        samples.push(sample);
    }
    Ok(RssTrace {
        model: cfg.model,
        samples,
    })
}

/// Summary statistics over one trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConnectivityReport {
    pub connected_fraction: f64,
    pub first_loss_distance_m: Option<f64>,
    pub min_margin_db: f64,
}

pub fn connectivity_report(trace: &RssTrace) -> Result<ConnectivityReport> {
    if trace.samples.is_empty() {
        return Err(Error::domain("empty trace".to_string()));
    }
    let n = trace.samples.len();
    let connected = trace.samples.iter().filter(|s| s.connected).count();
    let first_loss_distance_m = trace
        .samples
        .iter()
        .find(|s| s.margin_db < 0.0)
        .map(|s| s.distance_m);
    let min_margin_db = trace
        .samples
        .iter()
        .map(|s| s.margin_db)
        .fold(f64::INFINITY, f64::min);
    Ok(ConnectivityReport {
        connected_fraction: connected as f64 / n as f64,
        first_loss_distance_m,
        min_margin_db,
    })
}

/// Render aligned traces as CSV with the header
/// `distance_m,rss_fspl_dbm,rss_tworay_dbm,rss_simplified_dbm,margin_db,connected`,
/// omitting columns for models that were not requested. The margin and
/// connected columns come from the most physical model present (two-ray,
/// then simplified, then FSPL). Floats are written with six significant
/// digits so identical runs emit byte-identical files.
pub fn trace_to_csv(traces: &[RssTrace]) -> Result<String> {
    if traces.is_empty() {
        return Err(Error::domain("no traces to write".to_string()));
    }
    let n = traces[0].samples.len();
    for t in traces {
        if t.samples.len() != n {
            return Err(Error::domain("traces have mismatched lengths".to_string()));
        }
        for (a, b) in t.samples.iter().zip(&traces[0].samples) {
            if a.distance_m != b.distance_m {
                return Err(Error::domain(
                    "traces have mismatched distance grids".to_string(),
                ));
            }
        }
    }

    let ordered: Vec<&RssTrace> = ModelKind::ALL
        .iter()
        .filter_map(|m| traces.iter().find(|t| t.model == *m))
        .collect();
    let margin_source = [
        ModelKind::TwoRay,
        ModelKind::TwoRaySimplified,
        ModelKind::Fspl,
    ]
    .iter()
    .find_map(|m| ordered.iter().find(|t| t.model == *m))
    .expect("at least one trace");

    let mut out = String::from("distance_m");
    for t in &ordered {
        out.push(',');
        out.push_str(t.model.column_name());
    }
    out.push_str(",margin_db,connected\n");
    for i in 0..n {
        out.push_str(&format_sig6(traces[0].samples[i].distance_m));
        for t in &ordered {
            out.push(',');
            out.push_str(&format_sig6(t.samples[i].rss_dbm));
        }
        let m = &margin_source.samples[i];
        out.push(',');
        out.push_str(&format_sig6(m.margin_db));
        out.push(',');
        out.push_str(if m.connected { "true" } else { "false" });
        out.push('\n');
    }
    Ok(out)
}
