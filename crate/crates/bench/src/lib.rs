//! Fixed inputs shared by the benchmarks.

use accordion_core::analysis::{calibrate_pixel_scale, CalibrationFit, CalibrationPoint};
use accordion_core::field::interference_intensity;
use accordion_core::instrument::render_frame;
use accordion_core::presets::Preset;
use accordion_core::{CameraModel, GrayImage, IntensityFrame, LatticeConfig};

/// Focal-plane intensity of the short-lens single-frame preset on the
/// default camera grid.
pub fn fig4a_intensity() -> IntensityFrame {
    let preset = Preset::Fig4a;
    let grid = preset.camera().grid().unwrap();
    interference_intensity(&preset.lattice().unwrap(), &grid).unwrap()
}

/// Camera frame of that intensity with the given read noise.
pub fn fig4a_frame(read_noise: f64) -> GrayImage {
    let cam = CameraModel {
        read_noise,
        seed: 1,
        ..Preset::Fig4a.camera()
    };
    render_frame(&fig4a_intensity(), &cam, 0).unwrap()
}

pub fn fig6b_setup() -> (accordion_core::Trajectory, LatticeConfig, CameraModel) {
    let preset = Preset::Fig6b;
    (
        preset.trajectory().unwrap(),
        preset.lattice().unwrap(),
        preset.camera(),
    )
}

/// Exact twelve-point calibration data at the default pixel scale.
pub fn calibration_points() -> Vec<CalibrationPoint> {
    (0..12)
        .map(|i| {
            let sep = 5_000.0 + i as f64 * 1_300.0;
            CalibrationPoint {
                separation: sep,
                period_px: 0.532 * 30_000.0 / sep / 0.0853,
                uncertainty_px: None,
            }
        })
        .collect()
}

pub fn calibrate(points: &[CalibrationPoint]) -> CalibrationFit {
    calibrate_pixel_scale(points, 0.532, 30_000.0).unwrap()
}
