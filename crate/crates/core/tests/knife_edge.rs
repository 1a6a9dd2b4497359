mod common;

use accordion_core::analysis::{knife_edge_profile, knife_edge_waist};
use accordion_core::field::focal_envelope;
use accordion_core::{BeamSpec, GridSpec};

use common::half_plane_power;

fn profile(w: f64, shift: f64) -> Vec<(f64, f64)> {
    let grid = GridSpec::new(8.0 * w, 8.0 * w, 801, 401).unwrap();
    let spot = focal_envelope(&BeamSpec::new(w, 1.0).unwrap(), &grid).unwrap();
    let knives: Vec<f64> = (0..15)
        .map(|k| -1.5 * w + 3.0 * w * k as f64 / 14.0)
        .collect();
    knife_edge_profile(&spot, &knives)
        .into_iter()
        .map(|(x, p)| (x + shift, p))
        .collect()
}

#[test]
fn frame_integration_matches_half_plane_oracle() {
    for w in [36.0, 40.0] {
        for (x, p) in profile(w, 0.0) {
            let oracle = half_plane_power(w, x);
            assert!(
                (p - oracle).abs() <= 1e-4 * half_plane_power(w, 1e9),
                "w {w} x {x}: {p} vs {oracle}"
            );
        }
    }
}

#[test]
fn recovers_short_lens_waists() {
    for w in [36.0, 40.0] {
        let fit = knife_edge_waist(&profile(w, 0.0)).unwrap();
        assert!((fit.waist - w).abs() <= 0.2, "{w}: {}", fit.waist);
        assert!(fit.center.abs() <= 0.2);
    }
}

#[test]
fn translation_shifts_center_only() {
    let a = knife_edge_waist(&profile(36.0, 0.0)).unwrap();
    let b = knife_edge_waist(&profile(36.0, 125.0)).unwrap();
    assert!((b.center - a.center - 125.0).abs() < 1e-6);
    assert!((b.waist - a.waist).abs() < 1e-6);
}
