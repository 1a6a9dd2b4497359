//! Closed-form relations between beam separation, focal length, wavelength,
//! lattice spacing and crossing angle.
//!
//! All lengths are micrometers and all angles radians.

use crate::error::{ensure_positive, Error, Result};

/// Wavelength, lens focal length and center-to-center separation of the two
/// parallel beams entering the lens.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalParams {
    wavelength: f64,
    focal_length: f64,
    separation: f64,
}

impl OpticalParams {
    /// Validates all three lengths. The separation must stay below `2 f`,
    /// beyond which the beams no longer pass through the lens aperture model
    /// and the crossing angle is undefined.
    pub fn new(wavelength: f64, focal_length: f64, separation: f64) -> Result<Self> {
        ensure_positive("wavelength", wavelength)?;
        ensure_positive("focal_length", focal_length)?;
        ensure_positive("separation", separation)?;
        if separation >= 2.0 * focal_length {
            return Err(Error::Domain {
                name: "separation",
                value: separation,
                reason: "must be < 2 * focal_length",
            });
        }
        Ok(Self {
            wavelength,
            focal_length,
            separation,
        })
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn focal_length(&self) -> f64 {
        self.focal_length
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// Same optics with a different beam separation.
    pub fn with_separation(&self, separation: f64) -> Result<Self> {
        Self::new(self.wavelength, self.focal_length, separation)
    }

    /// Fringe period at the back focal plane, `λ f / D`.
    pub fn spacing_fourier(&self) -> f64 {
        self.wavelength * self.focal_length / self.separation
    }

    /// Plane-wave spacing estimate using the thin-lens angle `2 atan(D / 2f)`.
    /// Larger than [`spacing_fourier`](Self::spacing_fourier) by the factor
    /// `sqrt(1 + (D / 2f)^2)`.
    pub fn spacing_thin_lens(&self) -> f64 {
        let d = self.separation;
        let f = self.focal_length;
        self.wavelength * (d * d / 4.0 + f * f).sqrt() / d
    }

    /// Full crossing angle of the two beams at the focus, `2 asin(D / 2f)`.
    pub fn beam_angle(&self) -> f64 {
        2.0 * (self.separation / (2.0 * self.focal_length)).asin()
    }

    /// Thin-lens crossing angle `2 atan(D / 2f)`; always below
    /// [`beam_angle`](Self::beam_angle).
    pub fn beam_angle_thin_lens(&self) -> f64 {
        2.0 * (self.separation / (2.0 * self.focal_length)).atan()
    }

    /// Spatial frequency of the fringes in cycles per micrometer.
    pub fn fringe_frequency(&self) -> f64 {
        self.separation / (self.wavelength * self.focal_length)
    }
}

/// Beam separation that yields lattice spacing `spacing`: `D = λ f / d`.
pub fn separation_for_spacing(wavelength: f64, focal_length: f64, spacing: f64) -> Result<f64> {
    ensure_positive("wavelength", wavelength)?;
    ensure_positive("focal_length", focal_length)?;
    ensure_positive("spacing", spacing)?;
    Ok(wavelength * focal_length / spacing)
}

/// Focal-plane 1/e² waist produced by an ideal lens from a collimated input
/// beam of waist `input_waist`: `w = λ f / (π W)`. The relation is symmetric,
/// so the same function maps a focal waist back to the input waist.
pub fn focal_waist_from_input(wavelength: f64, focal_length: f64, input_waist: f64) -> Result<f64> {
    ensure_positive("wavelength", wavelength)?;
    ensure_positive("focal_length", focal_length)?;
    ensure_positive("input_waist", input_waist)?;
    Ok(wavelength * focal_length / (std::f64::consts::PI * input_waist))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const LAMBDA: f64 = 0.532;

    #[test]
    fn sweep_endpoints() {
        let far = OpticalParams::new(LAMBDA, 80_000.0, 3_790.0).unwrap();
        assert_relative_eq!(
            far.spacing_fourier(),
            11.229_551_451_187_335,
            max_relative = 1e-12
        );
        let near = OpticalParams::new(LAMBDA, 80_000.0, 43_810.0).unwrap();
        assert_relative_eq!(
            near.spacing_fourier(),
            0.971_467_701_438_028,
            max_relative = 1e-12
        );
        assert!((near.spacing_fourier() - 0.96).abs() < 0.015);
    }

    #[test]
    fn separation_equal_to_focal_length_gives_wavelength() {
        let p = OpticalParams::new(LAMBDA, 30_000.0, 30_000.0).unwrap();
        assert_eq!(p.spacing_fourier(), LAMBDA);
        assert_eq!(
            separation_for_spacing(LAMBDA, 30_000.0, LAMBDA).unwrap(),
            30_000.0
        );
    }

    #[test]
    fn thin_lens_overestimates_at_large_separation() {
        let p = OpticalParams::new(LAMBDA, 30_000.0, 19_250.0).unwrap();
        assert_relative_eq!(
            p.spacing_fourier(),
            0.829_090_909_090_909,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            p.spacing_thin_lens(),
            0.870_716_794_105_402_6,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            p.spacing_thin_lens() / p.spacing_fourier(),
            1.050_206_659_556_954_8,
            max_relative = 1e-12
        );

        let small = OpticalParams::new(LAMBDA, 80_000.0, 3_790.0).unwrap();
        assert_relative_eq!(
            small.spacing_thin_lens() / small.spacing_fourier(),
            1.000_280_509_485_339,
            max_relative = 1e-12
        );

        let tiny = OpticalParams::new(LAMBDA, 80_000.0, 1e-3).unwrap();
        assert_relative_eq!(
            tiny.spacing_thin_lens() / tiny.spacing_fourier(),
            1.0,
            max_relative = 1e-15
        );
    }

    #[test]
    fn crossing_angle_at_fig4_point() {
        let p = OpticalParams::new(LAMBDA, 30_000.0, 19_250.0).unwrap();
        assert_relative_eq!(
            p.beam_angle(),
            0.653_218_404_253_739_7,
            max_relative = 1e-12
        );
        assert!((p.beam_angle().to_degrees() - 37.4).abs() < 0.1);
        assert!((p.beam_angle_thin_lens().to_degrees() - 35.58).abs() < 0.01);
    }

    #[test]
    fn inversion_of_target_spacing() {
        let d = separation_for_spacing(LAMBDA, 80_000.0, 0.96).unwrap();
        assert_relative_eq!(d, 44_333.333_333_333_336, max_relative = 1e-12);
        let d = separation_for_spacing(LAMBDA, 80_000.0, 11.2).unwrap();
        assert_relative_eq!(d, 3_800.0, max_relative = 1e-12);
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(OpticalParams::new(0.0, 1.0, 0.5).is_err());
        assert!(OpticalParams::new(0.5, -1.0, 0.5).is_err());
        assert!(OpticalParams::new(0.5, 1.0, 0.0).is_err());
        assert!(OpticalParams::new(0.5, 1.0, 2.0).is_err());
        assert!(OpticalParams::new(0.5, 1.0, f64::NAN).is_err());
        assert!(OpticalParams::new(0.5, 1.0, 1.999).is_ok());
        assert!(separation_for_spacing(0.5, 1.0, 0.0).is_err());
        assert!(separation_for_spacing(-0.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn focal_waist_conversion_is_involutive() {
        let w = focal_waist_from_input(LAMBDA, 30_000.0, 140.0).unwrap();
        let back = focal_waist_from_input(LAMBDA, 30_000.0, w).unwrap();
        assert_relative_eq!(back, 140.0, max_relative = 1e-12);
    }

    proptest! {
        #[test]
        fn spacing_times_separation(lambda in 0.2f64..2.0, f in 1_000.0f64..200_000.0, frac in 0.01f64..1.9) {
            let p = OpticalParams::new(lambda, f, frac * f).unwrap();
            let lhs = p.spacing_fourier() * p.separation();
            prop_assert!(((lhs - lambda * f) / (lambda * f)).abs() < 1e-12);
            let back = separation_for_spacing(lambda, f, p.spacing_fourier()).unwrap();
            prop_assert!(((back - p.separation()) / p.separation()).abs() < 1e-12);
        }

        #[test]
        fn thin_lens_ratio(lambda in 0.2f64..2.0, f in 1_000.0f64..200_000.0, frac in 0.001f64..1.99) {
            let p = OpticalParams::new(lambda, f, frac * f).unwrap();
            let ratio = p.spacing_thin_lens() / p.spacing_fourier();
            let expected = (1.0 + (frac / 2.0).powi(2)).sqrt();
            prop_assert!(((ratio - expected) / expected).abs() < 1e-12);
            prop_assert!(p.spacing_thin_lens() >= p.spacing_fourier());
        }

        #[test]
        fn monotonicity(lambda in 0.2f64..2.0, f in 1_000.0f64..200_000.0, a in 0.01f64..1.9, b in 0.01f64..1.9) {
            prop_assume!(a != b);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let p_lo = OpticalParams::new(lambda, f, lo * f).unwrap();
            let p_hi = OpticalParams::new(lambda, f, hi * f).unwrap();
            prop_assert!(p_hi.spacing_fourier() < p_lo.spacing_fourier());
            prop_assert!(p_hi.beam_angle() > p_lo.beam_angle());
            prop_assert!(p_lo.beam_angle() - p_lo.beam_angle_thin_lens() > 0.0);

            let longer = OpticalParams::new(lambda * 1.1, f, lo * f).unwrap();
            prop_assert!(longer.spacing_fourier() > p_lo.spacing_fourier());
            let wider = OpticalParams::new(lambda, f * 1.1, lo * f).unwrap();
            prop_assert!(wider.spacing_fourier() > p_lo.spacing_fourier());
        }
    }
}
