//! Fringe period from the spectrum of the central image rows.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::linalg::{hann, median, weighted_least_squares};
use crate::error::{Error, Result};
use crate::instrument::GrayImage;

/// Minimum height of the fringe peak above the median spectrum, in dB.
pub const MIN_PEAK_DB: f64 = 6.0;

/// Fewest fringe periods the extractor accepts across the profile.
pub const MIN_PERIODS: f64 = 3.0;

/// Fewest pixels per fringe period the extractor accepts.
pub const MIN_SAMPLES_PER_PERIOD: f64 = 4.0;

/// Floor on the bin-offset uncertainty, covering residual interpolation and
/// leakage bias that the noise term does not see.
const BIAS_FLOOR_BINS: f64 = 0.002;

/// Peaks below this fraction of `Σ|profile|` (a modulation depth of a few
/// ppm) count as no fringe whatever the spectral noise floor.
const MIN_RELATIVE_PEAK: f64 = 1e-6;

/// Rows averaged about the sensor center when no explicit window is given:
/// the central quarter of the image, at least one row.
pub fn default_window_rows(height: usize) -> usize {
    (height / 4).max(1)
}

/// Mean of `window_rows` rows centered on the sensor's center row.
pub fn central_profile(image: &GrayImage, window_rows: Option<usize>) -> Vec<f64> {
    let h = image.height();
    let rows = window_rows
        .unwrap_or_else(|| default_window_rows(h))
        .clamp(1, h);
    let start = (h - rows).div_ceil(2);
    let mut profile = vec![0.0; image.width()];
    for y in start..start + rows {
        for (p, v) in profile.iter_mut().zip(image.row(y)) {
            *p += *v as f64;
        }
    }
    profile.iter_mut().for_each(|p| *p /= rows as f64);
    profile
}

/// Pixel coordinate measured from the profile center, matching the
/// camera's convention that `x = 0` lies midway across the sensor.
pub(crate) fn centered_x(i: usize, n: usize) -> f64 {
    i as f64 - 0.5 * (n as f64 - 1.0)
}

/// Hann-windowed profile with its weighted quadratic trend removed.
pub(crate) fn windowed_detrended(profile: &[f64]) -> Vec<f64> {
    let n = profile.len();
    let w = hann(n);
    let half = 0.5 * n as f64;
    let trend = weighted_least_squares(profile, &w, 3, |i, row| {
        let u = centered_x(i, n) / half;
        row.copy_from_slice(&[1.0, u, u * u]);
    });
    profile
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let t = trend.as_ref().map_or(0.0, |c| {
                let u = centered_x(i, n) / half;
                c[0] + c[1] * u + c[2] * u * u
            });
            w[i] * (v - t)
        })
        .collect()
}

/// FFT magnitudes of a windowed signal for bins `0..=n/2`.
pub(crate) fn magnitude_spectrum(signal: &[f64]) -> Vec<f64> {
    let n = signal.len();
    let fft = FftPlanner::new().plan_fft_forward(n);
    let mut buf: Vec<Complex64> = signal.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    fft.process(&mut buf);
    buf[..=n / 2].iter().map(|c| c.norm()).collect()
}

/// Magnitude of the discrete-time Fourier transform at `bin` (fractional).
pub(crate) fn dtft_magnitude(signal: &[f64], bin: f64) -> f64 {
    let n = signal.len() as f64;
    let step = Complex64::from_polar(1.0, -2.0 * PI * bin / n);
    let mut phasor = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, v) in signal.iter().enumerate() {
        acc += *v * phasor;
        // renormalize occasionally to stop the recurrence from drifting
        phasor = if i % 64 == 63 {
            Complex64::from_polar(1.0, -2.0 * PI * bin * (i + 1) as f64 / n)
        } else {
            phasor * step
        };
    }
    acc.norm()
}

/// Height of the spectrum at `bin` above the median spectrum, in dB.
pub(crate) fn peak_db(peak: f64, spectrum: &[f64]) -> f64 {
    let mut rest: Vec<f64> = spectrum[1..].to_vec();
    let floor = median(&mut rest);
    if peak <= 0.0 {
        f64::NEG_INFINITY
    } else if floor <= 0.0 {
        f64::INFINITY
    } else {
        20.0 * (peak / floor).log10()
    }
}

/// Period estimate in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodEstimate {
    pub period_px: f64,
    pub uncertainty_px: f64,
    /// Fringe peak above the median spectrum (dB).
    pub peak_db: f64,
}

impl PeriodEstimate {
    pub fn frequency(&self) -> f64 {
        1.0 / self.period_px
    }
}

/// Period of the fringes in a 1-D intensity profile.
///
/// The profile is detrended and Hann-windowed, the strongest non-DC FFT bin
/// is located, and its position is refined first by a three-point parabola
/// on log-magnitude and then by maximizing the windowed transform's
/// magnitude over continuous frequency within half a bin of that estimate.
/// Peak height over the spectral floor, or `-inf` for a vanishing peak.
pub(crate) fn fringe_db(peak: f64, spectrum: &[f64], profile: &[f64]) -> f64 {
    let scale: f64 = profile.iter().map(|v| v.abs()).sum();
    if peak <= MIN_RELATIVE_PEAK * scale {
        f64::NEG_INFINITY
    } else {
        peak_db(peak, spectrum)
    }
}

pub fn estimate_period(profile: &[f64]) -> Result<PeriodEstimate> {
    let n = profile.len();
    if (n as f64) < MIN_PERIODS * MIN_SAMPLES_PER_PERIOD {
        return Err(Error::Config(format!(
            "profile of {n} samples is too short"
        )));
    }
    let signal = windowed_detrended(profile);
    let spectrum = magnitude_spectrum(&signal);
    let last = spectrum.len() - 2;
    let (k, peak) = (1..=last)
        .map(|k| (k, spectrum[k]))
        .fold(
            (1, f64::NEG_INFINITY),
            |best, c| if c.1 > best.1 { c } else { best },
        );
    let db = fringe_db(peak, &spectrum, profile);
    let found = db >= MIN_PEAK_DB;
    if !found {
        return Err(Error::NoFringe { peak_db: db });
    }

    let ln = |v: f64| v.max(f64::MIN_POSITIVE).ln();
    let (a, b, g) = (ln(spectrum[k - 1]), ln(spectrum[k]), ln(spectrum[k + 1]));
    let curvature = a - 2.0 * b + g;
    let offset = if curvature < 0.0 {
        (0.5 * (a - g) / curvature).clamp(-0.5, 0.5)
    } else {
        0.0
    };
    let coarse = k as f64 + offset;
    let bin = golden_max(
        |f| dtft_magnitude(&signal, f),
        coarse - 0.5,
        coarse + 0.5,
        1e-9,
    );

    if bin < MIN_PERIODS {
        return Err(Error::TooFewPeriods { periods: bin });
    }
    let period_px = n as f64 / bin;
    if period_px < MIN_SAMPLES_PER_PERIOD {
        return Err(Error::Config(format!(
            "{period_px:.2} samples per period (< {MIN_SAMPLES_PER_PERIOD})"
        )));
    }

    let noise = 10f64.powf(-db / 20.0);
    let bin_sigma = if curvature < 0.0 {
        noise / (curvature.abs() * std::f64::consts::SQRT_2)
    } else {
        0.5
    } + BIAS_FLOOR_BINS;
    Ok(PeriodEstimate {
        period_px,
        uncertainty_px: period_px * bin_sigma / bin,
        peak_db: db,
    })
}

/// [`estimate_period`] on the row-averaged center of `image`.
pub fn extract_period(image: &GrayImage, window_rows: Option<usize>) -> Result<PeriodEstimate> {
    estimate_period(&central_profile(image, window_rows))
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}
