//! Command-line front end: distance sweeps, trajectory prediction,
//! model-versus-measurement comparison, soil calibration, and radio
//! horizon checks. Emits plot-ready CSV/JSON; rendering is left to
//! external plotters.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use tworay::budget::{self, ChannelConfig, ModelKind, SweepSpacing, Waypoint};
use tworay::empirics::{self, load_measurements};
use tworay::geometry::{breakpoint_distance_m, radio_horizon_m, DEFAULT_K_FACTOR};
use tworay::units::format_sig6;

mod presets;

#[derive(Parser)]
#[command(
    name = "tworay",
    version,
    about = "Two-ray ground-reflection channel prediction for UAV-to-ground links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep predicted received power over a range of distances.
    Sweep(SweepArgs),
    /// Predict received power along a 3-D waypoint trajectory.
    Trajectory(TrajectoryArgs),
    /// Compare model predictions against field measurements.
    Compare(CompareArgs),
    /// Grid-search the soil permittivity against measurements.
    Calibrate(CalibrateArgs),
    /// Radio-horizon distance and flat-earth validity for a height.
    Horizon(HorizonArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// Channel config: a JSON file path or a built-in preset name
    /// (e.g. paper-esp32).
    #[arg(long)]
    config: String,
    /// Override the config's ground with a preset name
    /// (grass-42, concrete-1.7, omnet-15) or a JSON file.
    #[arg(long)]
    ground: Option<String>,
}

impl ConfigArgs {
    fn load(&self) -> Result<ChannelConfig> {
        let (mut doc, base_dir) = presets::resolve_config(&self.config)?;
        if let Some(ground) = &self.ground {
            doc.ground = presets::resolve_ground(ground)?;
        }
        let cfg = doc.resolve(base_dir.as_deref())?;
        for (side, antenna) in [("tx", &cfg.tx_antenna), ("rx", &cfg.rx_antenna)] {
            if antenna.assumes_omni_azimuth() {
                eprintln!(
                    "warning: {side} antenna is horizontally polarized with no azimuth cut; \
                     assuming an omnidirectional azimuth plane"
                );
            }
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Smallest distance in metres.
    #[arg(long, default_value_t = 0.5)]
    d_min: f64,
    /// Largest distance in metres.
    #[arg(long, default_value_t = 50.0)]
    d_max: f64,
    /// Number of sweep points.
    #[arg(long, default_value_t = 200)]
    steps: usize,
    /// Comma-separated models: fspl, two_ray, two_ray_simplified.
    #[arg(long, default_value = "fspl,two_ray,two_ray_simplified")]
    models: String,
    /// Space points logarithmically instead of linearly.
    #[arg(long)]
    log_spacing: bool,
    /// Output trace CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct TrajectoryArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Waypoint CSV with header x_m,y_m,z_m.
    #[arg(long)]
    waypoints: PathBuf,
    /// Ground sensor position as x,y,z in metres.
    #[arg(long)]
    sensor: String,
    /// Clamp closer flyovers to this horizontal distance in metres.
    #[arg(long, default_value_t = budget::DEFAULT_MIN_DISTANCE_M)]
    min_distance: f64,
    /// Output trace CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Measurement CSV with header distance_m,rss_dbm.
    #[arg(long)]
    measurements: PathBuf,
    /// Model to compare against: fspl, two_ray, or two_ray_simplified.
    #[arg(long, default_value = "two_ray")]
    model: String,
    /// Interference/diffraction zone boundary in metres.
    #[arg(long, default_value_t = empirics::DEFAULT_ZONE_BOUNDARY_M)]
    zone_boundary: f64,
    /// Output per-sample error CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Also write the JSON summary here (it always prints to stdout).
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct CalibrateArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Measurement CSV with header distance_m,rss_dbm.
    #[arg(long)]
    measurements: PathBuf,
    /// Lower edge of the permittivity grid.
    #[arg(long, default_value_t = 1.0)]
    eps_min: f64,
    /// Upper edge of the permittivity grid.
    #[arg(long, default_value_t = 50.0)]
    eps_max: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Write the full (eps_r, rmse) profile CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HorizonArgs {
    /// Antenna height in metres.
    #[arg(long)]
    height: f64,
    /// Effective earth-radius factor.
    #[arg(long, default_value_t = DEFAULT_K_FACTOR)]
    k_factor: f64,
    /// Optional link distance in metres to check against the horizon.
    #[arg(long)]
    distance: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(args) => run_sweep(args),
        Command::Trajectory(args) => run_trajectory(args),
        Command::Compare(args) => run_compare(args),
        Command::Calibrate(args) => run_calibrate(args),
        Command::Horizon(args) => run_horizon(args),
    }
}

fn parse_models(spec: &str) -> Result<Vec<ModelKind>> {
    let mut models = Vec::new();
    for name in spec.split(',') {
        let model = ModelKind::parse(name.trim())?;
        if !models.contains(&model) {
            models.push(model);
        }
    }
    Ok(models)
}

fn parse_xyz(spec: &str) -> Result<Waypoint> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        bail!("expected x,y,z in metres (got '{spec}')");
    }
    let mut values = [0.0f64; 3];
    for (slot, part) in values.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .with_context(|| format!("invalid coordinate '{part}' in '{spec}'"))?;
    }
    Ok(Waypoint {
        x_m: values[0],
        y_m: values[1],
        z_m: values[2],
    })
}

fn run_sweep(args: SweepArgs) -> Result<()> {
    let cfg = args.config.load()?;
    let models = parse_models(&args.models)?;
    let spacing = if args.log_spacing {
        SweepSpacing::Log
    } else {
        SweepSpacing::Linear
    };
    let traces = budget::sweep(&cfg, args.d_min, args.d_max, args.steps, &models, spacing)?;
    let csv = budget::trace_to_csv(&traces)?;

    let d_break = breakpoint_distance_m(cfg.tx_height_m, cfg.rx_height_m, cfg.freq);
    let horizon = radio_horizon_m(cfg.tx_height_m.max(cfg.rx_height_m), DEFAULT_K_FACTOR)?;
    println!("d_break_m: {}", format_sig6(d_break));
    println!("radio_horizon_m: {}", format_sig6(horizon));
    println!("flat_earth_valid: {}", args.d_max < horizon);

    fs::write(&args.out, csv).with_context(|| format!("writing {}", args.out.display()))?;
    Ok(())
}

fn run_trajectory(args: TrajectoryArgs) -> Result<()> {
    let cfg = args.config.load()?;
    let waypoints = budget::load_waypoints(&args.waypoints)?;
    if waypoints.is_empty() {
        bail!("no waypoints in {}", args.waypoints.display());
    }
    let sensor = parse_xyz(&args.sensor)?;
    let trace = budget::trajectory_rss(&cfg, &waypoints, sensor, args.min_distance)?;
    for (i, sample) in trace.samples.iter().enumerate() {
        if sample.clamped {
            eprintln!(
                "warning: waypoint {i} passes within {} m of the sensor; distance clamped",
                args.min_distance
            );
        }
    }
    let csv = budget::trace_to_csv(std::slice::from_ref(&trace))?;
    let report = budget::connectivity_report(&trace)?;
    println!(
        "connected_fraction: {}",
        format_sig6(report.connected_fraction)
    );
    match report.first_loss_distance_m {
        Some(d) => println!("first_loss_distance_m: {}", format_sig6(d)),
        None => println!("first_loss_distance_m: none"),
    }
    println!("min_margin_db: {}", format_sig6(report.min_margin_db));

    fs::write(&args.out, csv).with_context(|| format!("writing {}", args.out.display()))?;
    Ok(())
}

fn run_compare(args: CompareArgs) -> Result<()> {
    let cfg = args.config.load()?;
    let measurements = load_measurements(&args.measurements)?;
    let model = ModelKind::parse(&args.model)?;
    let report = empirics::error_curve(&measurements, &cfg, model, args.zone_boundary)?;
    let csv = report.to_csv();
    let summary = report.summary_json();

    println!("{summary}");
    fs::write(&args.out, csv).with_context(|| format!("writing {}", args.out.display()))?;
    if let Some(path) = &args.summary {
        fs::write(path, format!("{summary}\n"))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn run_calibrate(args: CalibrateArgs) -> Result<()> {
    let cfg = args.config.load()?;
    let measurements = load_measurements(&args.measurements)?;
    let result = empirics::calibrate_permittivity(
        &measurements,
        &cfg,
        (args.eps_min, args.eps_max),
        args.steps,
    )?;
    println!("{}", result.summary_json());
    if let Some(path) = &args.out {
        fs::write(path, result.profile_csv())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn run_horizon(args: HorizonArgs) -> Result<()> {
    if !args.height.is_finite() || args.height <= 0.0 {
        bail!("height must be positive (got {} m)", args.height);
    }
    let horizon = radio_horizon_m(args.height, args.k_factor)?;
    println!("radio_horizon_m: {}", format_sig6(horizon));
    if let Some(distance) = args.distance {
        if distance < horizon {
            println!("verdict: flat-earth valid (distance {distance} m < horizon)");
        } else {
            println!("verdict: flat-earth invalid (distance {distance} m >= horizon)");
        }
    }
    Ok(())
}
