//! Deterministic outdoor RF channel prediction for UAV-to-ground-sensor
//! links.
//!
//! The crate implements the two-ray ground-reflection model with
//! polarization-dependent Fresnel reflection over a lossy ground,
//! rough-ground scattering, and measured antenna patterns, next to a
//! free-space path-loss baseline. On top of the closed-form channel math
//! sit a link-budget engine (loss chains, sensitivity margins, distance
//! sweeps, trajectory prediction) and measurement-comparison utilities
//! (error curves with interference/diffraction zone statistics and
//! soil-permittivity calibration).
//!
//! Everything is a pure function over immutable values: identical inputs
//! produce bit-identical outputs, and all types are safe to share across
//! threads.

pub mod antenna;
pub mod budget;
pub mod config;
pub mod empirics;
pub mod error;
pub mod geometry;
pub mod ground;
pub mod propagation;
pub mod reflection;
pub mod units;

pub use antenna::{ray_gains, AntennaKind, AntennaModel, PatternCut, RadiationPattern, RayGains};
pub use budget::{
    connectivity_report, predict_rss, predict_rss_with_model, sweep, trace_to_csv, trajectory_rss,
    ChannelConfig, ConnectivityReport, LossChain, LossEntry, LossSide, ModelKind, RssSample,
    RssTrace, SweepSpacing, Waypoint,
};
pub use config::{AntennaDoc, AntennaKindDoc, ConfigDoc};
pub use empirics::{
    calibrate_permittivity, error_curve, load_measurements, parse_measurements_csv,
    CalibrationResult, ErrorReport, ErrorSample, MeasurementMeta, MeasurementSample,
    MeasurementSet,
};
pub use error::{Error, Result};
pub use geometry::{breakpoint_distance_m, radio_horizon_m, LinkGeometry, RayPaths};
pub use ground::{complex_permittivity, ComplexPermittivity, GroundProfile};
pub use propagation::{fspl_db, two_ray_power, two_ray_power_raw, two_ray_power_simplified};
pub use reflection::{
    fresnel_parallel, fresnel_perpendicular, reflection_coefficient, scattering_coefficient,
    GrazingSign, Polarization,
};
pub use units::Frequency;
