//! Measurement of period, phase, contrast, pixel scale and beam waist from
//! digital frames.

mod calibration;
mod knife_edge;
mod linalg;
mod period;
mod phase;
mod tracking;

use rayon::prelude::*;

pub use calibration::{
    calibrate_pixel_scale, pixel_scale_from_waist, CalibrationFit, CalibrationPoint,
};
pub use knife_edge::{
    knife_edge_profile, knife_edge_profile_from_image, knife_edge_waist, KnifeEdgeFit,
    MAX_RELATIVE_RMS, MIN_KNIFE_POINTS,
};
pub use period::{
    central_profile, default_window_rows, estimate_period, extract_period, PeriodEstimate,
    MIN_PEAK_DB, MIN_PERIODS, MIN_SAMPLES_PER_PERIOD,
};
pub use phase::{
    extract_fringe_phase, measure_contrast, quadrature_fit, FringePhase, QuadratureFit,
};
pub use tracking::{track_center_fringe, CenterObservation, DriftTrack};

use crate::error::{Error, Result};
use crate::instrument::GrayImage;

/// Everything measured on one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeMeasurement {
    pub period_px: f64,
    pub period_uncertainty_px: f64,
    /// Fringe phase at the sensor center, in `(-π, π]`.
    pub fringe_phase: f64,
    /// Bright fringe nearest the sensor center (px), in `(-d/2, d/2]`.
    pub center_px: f64,
    pub contrast: f64,
}

impl FringeMeasurement {
    pub fn period_um(&self, pixel_scale: f64) -> f64 {
        self.period_px * pixel_scale
    }

    pub fn center_um(&self, pixel_scale: f64) -> f64 {
        self.center_px * pixel_scale
    }
}

/// Period first, then phase and contrast at that period.
pub fn measure_frame(image: &GrayImage, window_rows: Option<usize>) -> Result<FringeMeasurement> {
    let period = extract_period(image, window_rows)?;
    let profile = central_profile(image, window_rows);
    let fit = quadrature_fit(&profile, period.period_px)?;
    Ok(FringeMeasurement {
        period_px: period.period_px,
        period_uncertainty_px: period.uncertainty_px,
        fringe_phase: fit.phase,
        center_px: fit.center_position(period.period_px),
        contrast: fit.contrast(),
    })
}

/// Measures every frame in parallel; results keep the input order.
pub fn measure_frames(
    images: &[GrayImage],
    window_rows: Option<usize>,
) -> Vec<Result<FringeMeasurement>> {
    images
        .par_iter()
        .map(|img| measure_frame(img, window_rows))
        .collect()
}

/// Measures a sequence and unwraps its center fringe. `unwrap_periods_px`
/// supplies the per-frame lattice period used for branch selection (e.g. the
/// manifest's analytic spacing over the pixel scale); when `None` the
/// measured periods are used.
pub fn track_sequence(
    images: &[GrayImage],
    unwrap_periods_px: Option<&[f64]>,
    window_rows: Option<usize>,
) -> Result<(Vec<FringeMeasurement>, DriftTrack)> {
    if let Some(p) = unwrap_periods_px {
        if p.len() != images.len() {
            return Err(Error::Config(format!(
                "{} unwrap periods for {} frames",
                p.len(),
                images.len()
            )));
        }
    }
    let measurements = measure_frames(images, window_rows)
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            r.map_err(|e| Error::Frame {
                index,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let observations: Vec<CenterObservation> = measurements
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let period_px = unwrap_periods_px.map_or(m.period_px, |p| p[k]);
            CenterObservation {
                center_px: crate::field::reduce_to_period(m.center_px, period_px),
                period_px,
            }
        })
        .collect();
    let track = track_center_fringe(&observations)?;
    Ok((measurements, track))
}
