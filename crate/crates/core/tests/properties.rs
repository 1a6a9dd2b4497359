mod common;

use std::f64::consts::PI;

use accordion_core::analysis::{extract_fringe_phase, extract_period, measure_contrast};
use accordion_core::field::{beam_fields, superpose};
use accordion_core::instrument::DEFAULT_PIXEL_SCALE;
use accordion_core::{BeamSpec, CameraModel, GridSpec, LatticeConfig, OpticalParams};
use num_complex::Complex64;
use proptest::prelude::*;

use common::{autocorrelation_period, mean_rows, render, LAMBDA};

const F: f64 = 30_000.0;

fn lattice(d_px: f64, w: f64, ratio: f64, path_difference: f64) -> LatticeConfig {
    let optics = OpticalParams::new(LAMBDA, F, LAMBDA * F / (d_px * DEFAULT_PIXEL_SCALE)).unwrap();
    LatticeConfig::new(
        optics,
        BeamSpec::new(w, 1.0).unwrap(),
        BeamSpec::new(w, ratio.sqrt()).unwrap(),
        path_difference,
    )
    .unwrap()
}

fn wide_camera() -> CameraModel {
    CameraModel {
        sensor: (2048, 8),
        ..CameraModel::default().with_full_scale(4.0)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn period_matches_autocorrelation(d_px in 6.0f64..150.0, pd in 0.0f64..LAMBDA, ratio in 0.3f64..1.0) {
        let img = render(&lattice(d_px, 2_000.0, ratio, pd), &wide_camera(), 0);
        let got = extract_period(&img, None).unwrap().period_px;
        let oracle = autocorrelation_period(&mean_rows(&img)).unwrap();
        prop_assert!(((got - oracle) / oracle).abs() <= 0.005, "extractor {got}, oracle {oracle}");
    }

    #[test]
    fn intensity_ignores_common_phase(phi in -PI..PI, pd in -2.0f64..2.0, a2 in 0.1f64..2.0) {
        let optics = OpticalParams::new(LAMBDA, F, 12_000.0).unwrap();
        let cfg = LatticeConfig::new(optics, BeamSpec::new(30.0, 1.0).unwrap(), BeamSpec::new(45.0, a2).unwrap(), pd).unwrap();
        let grid = GridSpec::new(40.0, 10.0, 401, 11).unwrap();
        let (u1, u2) = beam_fields(&cfg, &grid).unwrap();
        let rot = Complex64::from_polar(1.0, phi);
        let a = superpose(&u1, &u2).unwrap();
        let b = superpose(&u1.scaled(rot), &u2.scaled(rot)).unwrap();
        let peak = a.max();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!((x - y).abs() <= 1e-12 * peak);
        }
    }

    #[test]
    fn contrast_follows_power_ratio(ratio in 0.05f64..1.0, d_px in 10.0f64..60.0) {
        let img = render(&lattice(d_px, 2_000.0, ratio, 0.0), &CameraModel::default().with_full_scale(4.0), 0);
        let period = extract_period(&img, None).unwrap().period_px;
        let c = measure_contrast(&img, period, None).unwrap();
        let expected = 2.0 * ratio.sqrt() / (1.0 + ratio);
        prop_assert!((c - expected).abs() <= 0.02, "contrast {c}, expected {expected}");
    }
}

#[test]
fn phase_is_linear_in_path_difference() {
    let cam = CameraModel::default().with_full_scale(4.0);
    let n = 24;
    let mut unwrapped: Vec<f64> = Vec::new();
    for k in 0..=n {
        let pd = LAMBDA * k as f64 / n as f64;
        let img = render(&lattice(23.0, 36.0, 1.0, pd), &cam, 0);
        let phase = extract_fringe_phase(&img, extract_period(&img, None).unwrap().period_px, None)
            .unwrap()
            .phase;
        let phase = match unwrapped.last() {
            None => phase,
            Some(&prev) => phase + 2.0 * PI * ((prev - phase) / (2.0 * PI)).round(),
        };
        unwrapped.push(phase);
    }
    let xs: Vec<f64> = (0..=n).map(|k| 2.0 * PI * k as f64 / n as f64).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = unwrapped.iter().sum::<f64>() / xs.len() as f64;
    let sxy: f64 = xs
        .iter()
        .zip(&unwrapped)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    assert!((slope - 1.0).abs() <= 0.01, "slope {slope}");
}

#[test]
fn period_ignores_envelope_width() {
    let cam = CameraModel::default().with_full_scale(4.0);
    let a = extract_period(&render(&lattice(17.3, 20.0, 1.0, 0.0), &cam, 0), None).unwrap();
    let b = extract_period(&render(&lattice(17.3, 200.0, 1.0, 0.0), &cam, 0), None).unwrap();
    assert!((a.period_px - b.period_px).abs() <= a.uncertainty_px.hypot(b.uncertainty_px));
}

#[test]
fn uniform_frame_has_no_fringe() {
    let optics = OpticalParams::new(LAMBDA, F, 10_000.0).unwrap();
    let cfg = LatticeConfig::new(
        optics,
        BeamSpec::new(2_000.0, 1.0).unwrap(),
        BeamSpec::new(2_000.0, 0.0).unwrap(),
        0.0,
    )
    .unwrap();
    let img = render(&cfg, &CameraModel::default().with_full_scale(1.0), 0);
    assert!(matches!(
        extract_period(&img, None),
        Err(accordion_core::Error::NoFringe { .. })
    ));
}
