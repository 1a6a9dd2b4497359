//! Fringe phase, center position and contrast at a known period.

use std::f64::consts::PI;

use super::linalg::{hann, weighted_least_squares};
use super::period::{
    centered_x, central_profile, dtft_magnitude, fringe_db, magnitude_spectrum, windowed_detrended,
    MIN_PEAK_DB,
};
use crate::error::{Error, Result};
use crate::field::reduce_to_period;
use crate::instrument::GrayImage;

/// Quadrature fit of one profile at a fixed fringe frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureFit {
    /// Phase of the fundamental at the profile center, in `(-π, π]`.
    pub phase: f64,
    /// Modulation amplitude at the profile center.
    pub amplitude: f64,
    /// Local mean intensity at the profile center.
    pub mean: f64,
}

impl QuadratureFit {
    /// Michelson contrast, `amplitude / mean`, clipped to `[0, 1]`.
    pub fn contrast(&self) -> f64 {
        if self.mean <= 0.0 {
            0.0
        } else {
            (self.amplitude / self.mean).clamp(0.0, 1.0)
        }
    }

    /// Bright fringe nearest the center, `-phase · d / 2π`, reduced into
    /// `(-d/2, d/2]`.
    pub fn center_position(&self, period: f64) -> f64 {
        reduce_to_period(-self.phase / (2.0 * PI) * period, period)
    }
}

/// Projects `profile` onto `cos` and `sin` at `1 / period_px`.
///
/// The fit is a Hann-weighted least-squares model
/// `P(x) + C(x) cos(kx) + S(x) sin(kx)` with quadratic `P`, `C`, `S`, so a
/// Gaussian envelope and a slightly wrong period do not bias the phase at
/// `x = 0`. With intensity `M (1 + c cos(kx + φ))` the fitted constants give
/// `φ = atan2(-S0, C0)` and contrast `sqrt(C0² + S0²) / P0`.
pub fn quadrature_fit(profile: &[f64], period_px: f64) -> Result<QuadratureFit> {
    let n = profile.len();
    if !(period_px.is_finite() && period_px > 0.0) {
        return Err(Error::Domain {
            name: "period",
            value: period_px,
            reason: "must be finite and > 0",
        });
    }
    let k = 2.0 * PI / period_px;
    let half = 0.5 * n as f64;
    let w = hann(n);
    let coef = weighted_least_squares(profile, &w, 9, |i, row| {
        let x = centered_x(i, n);
        let u = x / half;
        let (s, c) = (k * x).sin_cos();
        row.copy_from_slice(&[1.0, u, u * u, c, u * c, u * u * c, s, u * s, u * u * s]);
    })
    .ok_or_else(|| Error::FitFailed("singular quadrature system".into()))?;
    let (mean, cos0, sin0) = (coef[0], coef[3], coef[6]);
    let mut phase = (-sin0).atan2(cos0);
    if phase <= -PI {
        phase += 2.0 * PI;
    }
    Ok(QuadratureFit {
        phase,
        amplitude: cos0.hypot(sin0),
        mean,
    })
}

fn check_fringe_at(profile: &[f64], period_px: f64) -> Result<()> {
    let signal = windowed_detrended(profile);
    let spectrum = magnitude_spectrum(&signal);
    let peak = dtft_magnitude(&signal, profile.len() as f64 / period_px);
    let db = fringe_db(peak, &spectrum, profile);
    if db >= MIN_PEAK_DB {
        Ok(())
    } else {
        Err(Error::NoFringe { peak_db: db })
    }
}

/// Fringe phase and center position of an image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringePhase {
    pub phase: f64,
    /// Bright fringe nearest the sensor center, pixels, in `(-d/2, d/2]`.
    pub center_px: f64,
}

/// Phase of the fringes at the sensor center, given their period (from
/// [`extract_period`](super::extract_period)) in pixels.
pub fn extract_fringe_phase(
    image: &GrayImage,
    known_period_px: f64,
    window_rows: Option<usize>,
) -> Result<FringePhase> {
    let profile = central_profile(image, window_rows);
    check_fringe_at(&profile, known_period_px)?;
    let fit = quadrature_fit(&profile, known_period_px)?;
    Ok(FringePhase {
        phase: fit.phase,
        center_px: fit.center_position(known_period_px),
    })
}

/// Michelson contrast at the sensor center. Frames without fringes measure
/// near zero rather than failing.
pub fn measure_contrast(
    image: &GrayImage,
    known_period_px: f64,
    window_rows: Option<usize>,
) -> Result<f64> {
    let profile = central_profile(image, window_rows);
    Ok(quadrature_fit(&profile, known_period_px)?.contrast())
}
