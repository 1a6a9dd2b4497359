//! Pixel-scale calibration against the spacing law `d = λ f / D`.

use crate::error::{ensure_positive, Error, Result};

/// A measured fringe period at a known beam separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationPoint {
    pub separation: f64,
    pub period_px: f64,
    /// Standard uncertainty of `period_px`; when any point lacks one, all
    /// points are weighted by equal relative error instead.
    pub uncertainty_px: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationFit {
    /// Focal-plane µm per pixel.
    pub pixel_scale: f64,
    pub pixel_scale_uncertainty: f64,
    /// Model periods `λ f / (D s)` in pixels, one per point.
    pub fitted_periods: Vec<f64>,
    /// `(measured - model) / model`, one per point.
    pub residuals: Vec<f64>,
}

/// Least-squares fit of `period_px = (λ f / D) / s` with `s` the only free
/// parameter.
///
/// Writing `t = 1 / s` and `u = λ f / D`, the weighted solution is
/// `t = Σ w u p / Σ w u²`; its standard error comes from the weighted residual
/// scatter.
pub fn calibrate_pixel_scale(
    points: &[CalibrationPoint],
    wavelength: f64,
    focal_length: f64,
) -> Result<CalibrationFit> {
    ensure_positive("wavelength", wavelength)?;
    ensure_positive("focal_length", focal_length)?;
    if points.len() < 3 {
        return Err(Error::IllConditioned(format!(
            "{} points, need at least 3",
            points.len()
        )));
    }
    for p in points {
        ensure_positive("separation", p.separation)?;
        ensure_positive("period", p.period_px)?;
    }
    let (dmin, dmax) = points.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), p| {
        (lo.min(p.separation), hi.max(p.separation))
    });
    if dmax < 2.0 * dmin {
        return Err(Error::IllConditioned(format!(
            "separations span {dmin}..{dmax} um, need at least a factor of 2"
        )));
    }

    let use_given = points
        .iter()
        .all(|p| p.uncertainty_px.is_some_and(|u| u > 0.0));
    let weights: Vec<f64> = points
        .iter()
        .map(|p| match p.uncertainty_px {
            Some(u) if use_given => 1.0 / (u * u),
            _ => 1.0 / (p.period_px * p.period_px),
        })
        .collect();
    let lf = wavelength * focal_length;
    let (mut num, mut den) = (0.0, 0.0);
    for (p, w) in points.iter().zip(&weights) {
        let u = lf / p.separation;
        num += w * u * p.period_px;
        den += w * u * u;
    }
    let t = num / den;

    let fitted_periods: Vec<f64> = points.iter().map(|p| lf / p.separation * t).collect();
    let residuals: Vec<f64> = points
        .iter()
        .zip(&fitted_periods)
        .map(|(p, m)| (p.period_px - m) / m)
        .collect();
    let chi2: f64 = points
        .iter()
        .zip(&fitted_periods)
        .zip(&weights)
        .map(|((p, m), w)| w * (p.period_px - m).powi(2))
        .sum();
    let t_sigma = (chi2 / (points.len() - 1) as f64 / den).sqrt();

    Ok(CalibrationFit {
        pixel_scale: 1.0 / t,
        pixel_scale_uncertainty: t_sigma / (t * t),
        fitted_periods,
        residuals,
    })
}

/// Pixel scale from a beam of known physical waist imaged at `waist_px`
/// pixels; uncertainties combine in quadrature.
pub fn pixel_scale_from_waist(
    physical_waist: f64,
    physical_uncertainty: f64,
    waist_px: f64,
    waist_px_uncertainty: f64,
) -> Result<(f64, f64)> {
    ensure_positive("physical_waist", physical_waist)?;
    ensure_positive("waist_px", waist_px)?;
    let s = physical_waist / waist_px;
    let rel = (physical_uncertainty / physical_waist).hypot(waist_px_uncertainty / waist_px);
    Ok((s, s * rel))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LAMBDA: f64 = 0.532;
    const F: f64 = 30_000.0;

    fn exact_points(scale: f64) -> Vec<CalibrationPoint> {
        (0..12)
            .map(|i| {
                let d = 5_000.0 + i as f64 * (19_250.0 - 5_000.0) / 11.0;
                CalibrationPoint {
                    separation: d,
                    period_px: LAMBDA * F / d / scale,
                    uncertainty_px: None,
                }
            })
            .collect()
    }

    #[test]
    fn exact_points_recover_scale() {
        let fit = calibrate_pixel_scale(&exact_points(0.0853), LAMBDA, F).unwrap();
        assert!(((fit.pixel_scale - 0.0853) / 0.0853).abs() < 1e-12);
        assert!(fit.pixel_scale_uncertainty < 1e-12);
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn doubling_periods_halves_scale() {
        let pts = exact_points(0.0853);
        let doubled: Vec<_> = pts
            .iter()
            .map(|p| CalibrationPoint {
                period_px: 2.0 * p.period_px * (1.0 + 1e-3 * (p.separation / 1000.0).sin()),
                ..*p
            })
            .collect();
        let base: Vec<_> = pts
            .iter()
            .map(|p| CalibrationPoint {
                period_px: p.period_px * (1.0 + 1e-3 * (p.separation / 1000.0).sin()),
                ..*p
            })
            .collect();
        let a = calibrate_pixel_scale(&base, LAMBDA, F).unwrap();
        let b = calibrate_pixel_scale(&doubled, LAMBDA, F).unwrap();
        assert_eq!(b.pixel_scale, a.pixel_scale / 2.0);
        assert!(a.pixel_scale_uncertainty > 0.0);
    }

    #[test]
    fn weighted_by_uncertainties() {
        let mut pts = exact_points(0.1);
        pts.iter_mut().for_each(|p| p.uncertainty_px = Some(0.01));
        pts[0].period_px *= 1.01;
        pts[0].uncertainty_px = Some(1e3);
        let fit = calibrate_pixel_scale(&pts, LAMBDA, F).unwrap();
        assert!((fit.pixel_scale - 0.1).abs() < 1e-7);
    }

    #[test]
    fn ill_conditioned_inputs() {
        let pts = exact_points(0.0853);
        assert!(matches!(
            calibrate_pixel_scale(&pts[..2], LAMBDA, F),
            Err(Error::IllConditioned(_))
        ));
        // 5.0 .. 7.6 mm spans less than a factor of two
        assert!(matches!(
            calibrate_pixel_scale(&pts[..3], LAMBDA, F),
            Err(Error::IllConditioned(_))
        ));
    }

    #[test]
    fn waist_route() {
        let (s, ds) = pixel_scale_from_waist(36.0, 0.2, 36.0 / 0.0853, 0.0).unwrap();
        assert!((s - 0.0853).abs() < 1e-15);
        assert!((ds / s - 0.2 / 36.0).abs() < 1e-12);
    }
}
