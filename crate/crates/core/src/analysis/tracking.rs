//! Following the center fringe through a sequence of frames.

use crate::error::{Error, Result};

/// Per-frame input to the unwrap pass: the reduced center position and the
/// lattice period, both in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterObservation {
    pub center_px: f64,
    pub period_px: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftTrack {
    /// Unwrapped center-fringe position per frame (px).
    pub positions_px: Vec<f64>,
    /// Largest `|position|` over the sequence (px).
    pub max_drift_px: f64,
}

impl DriftTrack {
    pub fn scaled(&self, pixel_scale: f64) -> (Vec<f64>, f64) {
        (
            self.positions_px.iter().map(|p| p * pixel_scale).collect(),
            self.max_drift_px * pixel_scale,
        )
    }
}

/// Unwraps reduced center positions across frames, choosing for each frame
/// the branch `center + m * period` nearest the previous frame's position.
///
/// Fails when the chosen branch still moves by more than a quarter period,
/// since the nearest-branch choice is then ambiguous.
pub fn track_center_fringe(observations: &[CenterObservation]) -> Result<DriftTrack> {
    let mut positions = Vec::with_capacity(observations.len());
    for (k, obs) in observations.iter().enumerate() {
        if !(obs.period_px.is_finite() && obs.period_px > 0.0) {
            return Err(Error::Frame {
                index: k,
                source: Box::new(Error::Domain {
                    name: "period",
                    value: obs.period_px,
                    reason: "must be finite and > 0",
                }),
            });
        }
        let pos = match positions.last() {
            None => obs.center_px,
            Some(&prev) => {
                let prev: f64 = prev;
                let m = ((prev - obs.center_px) / obs.period_px).round();
                let pos = obs.center_px + m * obs.period_px;
                let jump = (pos - prev).abs();
                let limit = 0.25 * obs.period_px;
                if jump > limit {
                    return Err(Error::Unwrap {
                        frame: k,
                        jump,
                        limit,
                    });
                }
                pos
            }
        };
        positions.push(pos);
    }
    let max_drift_px = positions.iter().fold(0.0f64, |m, p| m.max(p.abs()));
    Ok(DriftTrack {
        positions_px: positions,
        max_drift_px,
    })
}
