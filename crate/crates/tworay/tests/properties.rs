//! Property tests for the channel-math invariants.

use proptest::prelude::*;

use tworay::budget::{
    predict_rss, predict_rss_with_model, ChannelConfig, LossChain, LossEntry, LossSide, ModelKind,
};
use tworay::empirics::{error_curve, MeasurementMeta, MeasurementSample, MeasurementSet};
use tworay::{
    breakpoint_distance_m, fresnel_parallel, fresnel_perpendicular, fspl_db,
    scattering_coefficient, two_ray_power_raw, two_ray_power_simplified, AntennaModel,
    ComplexPermittivity, Frequency, GrazingSign, GroundProfile, LinkGeometry, PatternCut,
    Polarization, RadiationPattern,
};

fn arb_permittivity() -> impl Strategy<Value = ComplexPermittivity> {
    (1.0f64..100.0, -100.0f64..=0.0).prop_map(|(re, im)| ComplexPermittivity::new(re, im).unwrap())
}

fn arb_incidence() -> impl Strategy<Value = f64> {
    // Grazing angle in (0, 90] degrees, biased toward the grazing end.
    prop_oneof![1e-4f64..90.0, 1e-6f64..1.0].prop_map(|deg: f64| deg.to_radians())
}

fn arb_frequency() -> impl Strategy<Value = Frequency> {
    (100.0f64..6000.0).prop_map(|mhz| Frequency::from_megahertz(mhz).unwrap())
}

fn base_config() -> ChannelConfig {
    ChannelConfig {
        freq: Frequency::from_gigahertz(2.412).unwrap(),
        tx_power_dbm: 10.0,
        tx_losses: LossChain::empty(LossSide::Transmit),
        rx_losses: LossChain::empty(LossSide::Receive),
        tx_antenna: AntennaModel::isotropic(Polarization::Horizontal),
        rx_antenna: AntennaModel::isotropic(Polarization::Horizontal),
        ground: GroundProfile::new(15.0, 0.0, 0.0).unwrap(),
        tx_height_m: 5.0,
        rx_height_m: 0.15,
        sensitivity_dbm: -85.0,
        model: ModelKind::TwoRay,
        divergence: 1.0,
        grazing_sign: GrazingSign::Verbatim,
    }
}

proptest! {
    /// Physical grounds never reflect more energy than arrives.
    #[test]
    fn reflection_magnitude_bounded(eps in arb_permittivity(), theta in arb_incidence()) {
        let par = fresnel_parallel(eps, theta).unwrap();
        let perp = fresnel_perpendicular(eps, theta).unwrap();
        prop_assert!(par.norm() <= 1.0 + 1e-12, "|par|={} eps={:?}", par.norm(), eps);
        prop_assert!(perp.norm() <= 1.0 + 1e-12, "|perp|={} eps={:?}", perp.norm(), eps);
    }

    /// Polarizations are indistinguishable at normal incidence.
    #[test]
    fn polarizations_agree_at_normal_incidence(eps in arb_permittivity()) {
        let theta = std::f64::consts::FRAC_PI_2;
        let par = fresnel_parallel(eps, theta).unwrap();
        let perp = fresnel_perpendicular(eps, theta).unwrap();
        prop_assert!((par - perp).norm() < 1e-12, "par={par} perp={perp}");
    }

    /// Scattering stays in (0, 1] over physical ground roughness, and
    /// smooth ground is exactly specular. Strict positivity is only
    /// testable below the f64 underflow boundary of exp(-0.5 x^2),
    /// x ~ 38.6; centimetre-scale roughness stays far inside it.
    #[test]
    fn scattering_in_unit_interval(
        dh in 0.0f64..0.1,
        theta in arb_incidence(),
        freq in arb_frequency(),
    ) {
        let ground = GroundProfile::new(15.0, 0.0, dh).unwrap();
        let rho = scattering_coefficient(&ground, theta, freq);
        prop_assert!(rho > 0.0 && rho <= 1.0, "rho={rho}");
        let smooth = GroundProfile::new(15.0, 0.0, 0.0).unwrap();
        prop_assert_eq!(scattering_coefficient(&smooth, theta, freq), 1.0);
    }

    /// Even at absurd roughness the coefficient never leaves [0, 1]; it
    /// may underflow to exactly zero.
    #[test]
    fn scattering_bounded_at_extreme_roughness(
        dh in 0.0f64..1000.0,
        theta in arb_incidence(),
        freq in arb_frequency(),
    ) {
        let ground = GroundProfile::new(15.0, 0.0, dh).unwrap();
        let rho = scattering_coefficient(&ground, theta, freq);
        prop_assert!((0.0..=1.0).contains(&rho), "rho={rho}");
    }

    /// Rougher ground never scatters less.
    #[test]
    fn scattering_monotone_in_roughness(
        dh in 0.0f64..5.0,
        extra in 0.0f64..5.0,
        theta in arb_incidence(),
        freq in arb_frequency(),
    ) {
        let smoother = GroundProfile::new(15.0, 0.0, dh).unwrap();
        let rougher = GroundProfile::new(15.0, 0.0, dh + extra).unwrap();
        prop_assert!(
            scattering_coefficient(&rougher, theta, freq)
                <= scattering_coefficient(&smoother, theta, freq)
        );
    }

    /// The reflected path is never shorter than the direct path.
    #[test]
    fn reflected_path_dominates(
        ht in 0.01f64..500.0,
        hr in 0.01f64..500.0,
        d in 0.0f64..10_000.0,
    ) {
        let paths = LinkGeometry::new(ht, hr, d).unwrap().solve();
        prop_assert!(paths.reflected_length_m >= paths.los_length_m);
    }

    /// With the reflection zeroed, the two-ray equation collapses to the
    /// Friis/FSPL line-of-sight value (the published 32.45 constant is
    /// rounded from 32.4478, a fixed 0.0022 dB offset).
    #[test]
    fn zeroed_reflection_matches_fspl(
        d in 1.0f64..1000.0,
        freq in arb_frequency(),
        h in 0.5f64..50.0,
    ) {
        let geom = LinkGeometry::new(h, h, d).unwrap();
        let p = two_ray_power_raw(
            1.0,
            &geom,
            freq,
            num_complex::Complex64::new(0.0, 0.0),
            0.0,
            1.0,
            1.0,
            1.0,
        )
        .unwrap();
        let loss_db = -10.0 * p.log10();
        let fspl = fspl_db(d, freq).unwrap();
        prop_assert!((loss_db - fspl).abs() < 0.01, "friis={loss_db} fspl={fspl}");
    }

    /// Far beyond the breakpoint the simplified model follows the
    /// (h_t h_r / d^2)^2 power law within 5%.
    #[test]
    fn simplified_far_field_asymptote(
        ht in 0.5f64..10.0,
        hr in 0.5f64..10.0,
        freq in arb_frequency(),
        factor in 1.0f64..20.0,
    ) {
        let d = 50.0 * breakpoint_distance_m(ht, hr, freq) * factor;
        let geom = LinkGeometry::new(ht, hr, d).unwrap();
        let p = two_ray_power_simplified(1.0, &geom, freq).unwrap();
        let asymptote = (ht * hr / (d * d)).powi(2);
        let rel = (p - asymptote).abs() / asymptote;
        prop_assert!(rel < 0.05, "rel={rel} d={d}");
    }

    /// Measured-pattern lookups wrap modulo 360 and reproduce sample
    /// values exactly.
    #[test]
    fn pattern_lookup_periodic_and_exact(
        gains in proptest::collection::vec(-30.0f64..10.0, 4..24),
        probe in 0.0f64..360.0,
    ) {
        let n = gains.len();
        let samples: Vec<(f64, f64)> = gains
            .iter()
            .enumerate()
            .map(|(i, &g)| (360.0 * i as f64 / n as f64, g))
            .collect();
        let csv = std::iter::once("angle_deg,gain_dbi".to_string())
            .chain(samples.iter().map(|(a, g)| format!("{a},{g}")))
            .collect::<Vec<_>>()
            .join("\n");
        let pattern = RadiationPattern::parse_csv(&csv, PatternCut::Elevation, "prop").unwrap();
        for (a, g) in &samples {
            prop_assert_eq!(pattern.gain_dbi_at(*a), *g);
        }
        let wrapped = pattern.gain_dbi_at(probe + 360.0);
        let direct = pattern.gain_dbi_at(probe);
        prop_assert!((wrapped - direct).abs() < 1e-9, "direct={direct} wrapped={wrapped}");
    }

    /// One extra dBm of transmit power is one extra dBm of RSS.
    #[test]
    fn rss_linear_in_tx_power(
        d in 0.5f64..200.0,
        delta in -20.0f64..20.0,
        model_idx in 0usize..3,
    ) {
        let cfg = base_config();
        let model = ModelKind::ALL[model_idx];
        let geom = cfg.geometry_at(d).unwrap();
        let s0 = predict_rss_with_model(&cfg, &geom, model).unwrap();
        let mut cfg2 = cfg.clone();
        cfg2.tx_power_dbm += delta;
        let s1 = predict_rss_with_model(&cfg2, &geom, model).unwrap();
        prop_assert!((s1.rss_dbm - s0.rss_dbm - delta).abs() < 1e-9);
    }

    /// Adding a loss entry of L dB lowers the RSS by exactly L dB.
    #[test]
    fn rss_linear_in_losses(d in 0.5f64..200.0, loss in 0.0f64..30.0) {
        let cfg = base_config();
        let geom = cfg.geometry_at(d).unwrap();
        let s0 = predict_rss(&cfg, &geom).unwrap();
        let mut cfg2 = cfg.clone();
        cfg2.tx_losses.entries.push(LossEntry { label: "pad".into(), loss_db: loss });
        let s1 = predict_rss(&cfg2, &geom).unwrap();
        prop_assert!((s0.rss_dbm - s1.rss_dbm - loss).abs() < 1e-9);
    }

    /// Shifting every measurement by +c dB shifts every error by
    /// exactly +c dB.
    #[test]
    fn error_curve_shift_equivariance(c in -15.0f64..15.0) {
        let cfg = base_config();
        let distances: Vec<f64> = (1..=30).map(|i| i as f64 * 1.5).collect();
        let mk = |offset: f64| {
            let samples = distances
                .iter()
                .map(|&d| {
                    let geom = cfg.geometry_at(d).unwrap();
                    MeasurementSample {
                        distance_m: d,
                        rss_dbm: predict_rss(&cfg, &geom).unwrap().rss_dbm + offset,
                    }
                })
                .collect();
            MeasurementSet { samples, metadata: MeasurementMeta::default() }
        };
        let r0 = error_curve(&mk(0.0), &cfg, ModelKind::TwoRay, 20.0).unwrap();
        let r1 = error_curve(&mk(c), &cfg, ModelKind::TwoRay, 20.0).unwrap();
        for (a, b) in r0.per_sample.iter().zip(&r1.per_sample) {
            prop_assert!((b.error_db - a.error_db - c).abs() < 1e-9);
        }
    }

    /// Zone RMSEs recompose into the total RMSE with sample-count
    /// weights.
    #[test]
    fn rmse_decomposition(offset in -10.0f64..10.0, boundary in 5.0f64..45.0) {
        let cfg = base_config();
        let samples: Vec<MeasurementSample> = (1..=40)
            .map(|i| {
                let d = i as f64 * 1.2;
                let geom = cfg.geometry_at(d).unwrap();
                MeasurementSample {
                    distance_m: d,
                    rss_dbm: predict_rss(&cfg, &geom).unwrap().rss_dbm
                        + offset * (d / 11.0).sin(),
                }
            })
            .collect();
        let meas = MeasurementSet { samples, metadata: MeasurementMeta::default() };
        let r = error_curve(&meas, &cfg, ModelKind::TwoRay, boundary).unwrap();
        let n = r.per_sample.len() as f64;
        let lhs = r.rmse_total_db.powi(2) * n;
        let rhs = r.rmse_interference_zone_db.powi(2) * r.interference_count as f64
            + r.rmse_diffraction_zone_db.powi(2) * r.diffraction_count as f64;
        prop_assert!((lhs - rhs).abs() < 1e-9 * lhs.max(1.0), "lhs={lhs} rhs={rhs}");
    }
}

/// The grazing limits of the printed reflection formulas: +1 for the
/// parallel coefficient, -1 for the perpendicular one.
#[test]
fn grazing_limits_for_real_grounds() {
    for eps_r in [1.7, 4.0, 15.0, 42.0] {
        let eps = ComplexPermittivity::new(eps_r, 0.0).unwrap();
        let theta = 1e-6f64.to_radians();
        let par = fresnel_parallel(eps, theta).unwrap();
        let perp = fresnel_perpendicular(eps, theta).unwrap();
        assert!(
            (par.re - 1.0).abs() < 1e-6 && par.im.abs() < 1e-9,
            "par={par}"
        );
        assert!(
            (perp.re + 1.0).abs() < 1e-6 && perp.im.abs() < 1e-9,
            "perp={perp}"
        );
    }
}

/// The last constructive/destructive crossover of the simplified model
/// sits at 4 h_t h_r / lambda; roughly 24.1 m for the 5 m / 0.15 m field
/// geometry at 2.412 GHz, consistent with a ~20 m interference zone.
#[test]
fn breakpoint_matches_hand_value() {
    let freq = Frequency::from_gigahertz(2.412).unwrap();
    let d_break = breakpoint_distance_m(5.0, 0.15, freq);
    assert!((d_break - 24.1367).abs() < 1e-3, "d_break={d_break}");
}
