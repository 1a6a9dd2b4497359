//! Digital camera looking at the focal plane through the imaging objective.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{ensure_nonnegative, ensure_positive, Error, Result};
use crate::field::{GridSpec, IntensityFrame};

/// Focal-plane micrometers per pixel of the default camera.
pub const DEFAULT_PIXEL_SCALE: f64 = 0.0853;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitDepth {
    Eight,
    Sixteen,
}

impl BitDepth {
    pub fn from_bits(bits: u32) -> Result<Self> {
        match bits {
            8 => Ok(Self::Eight),
            16 => Ok(Self::Sixteen),
            other => Err(Error::Config(format!(
                "bit depth must be 8 or 16, got {other}"
            ))),
        }
    }

    pub fn bits(self) -> u32 {
        match self {
            Self::Eight => 8,
            Self::Sixteen => 16,
        }
    }

    pub fn max_value(self) -> u16 {
        match self {
            Self::Eight => u8::MAX as u16,
            Self::Sixteen => u16::MAX,
        }
    }
}

/// Single-channel digital image, row-major with x fastest. Row 0 is the top
/// of the sensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    depth: BitDepth,
    pixels: Vec<u16>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, depth: BitDepth, pixels: Vec<u16>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(Error::Config(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        if let Some(p) = pixels.iter().find(|p| **p > depth.max_value()) {
            return Err(Error::Config(format!(
                "pixel value {p} exceeds {}-bit range",
                depth.bits()
            )));
        }
        Ok(Self {
            width,
            height,
            depth,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn depth(&self) -> BitDepth {
        self.depth
    }

    pub fn pixels(&self) -> &[u16] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u16 {
        self.pixels[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[u16] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    /// Index of the row through the sensor center.
    pub fn center_row(&self) -> usize {
        self.height / 2
    }
}

/// Pixel geometry, gain and noise of the camera.
///
/// The sensor is centered on the lens axis: pixel `i` images
/// `x = (i - (nx - 1) / 2) * pixel_scale`, with x increasing to the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraModel {
    /// Focal-plane µm per pixel, objective magnification included.
    pub pixel_scale: f64,
    pub sensor: (usize, usize),
    pub bit_depth: BitDepth,
    /// Additive Gaussian read noise, rms counts.
    pub read_noise: f64,
    /// Counts per unit of focal-plane intensity.
    pub exposure_gain: f64,
    pub seed: u64,
}

impl Default for CameraModel {
    fn default() -> Self {
        Self {
            pixel_scale: DEFAULT_PIXEL_SCALE,
            sensor: (640, 120),
            bit_depth: BitDepth::Eight,
            read_noise: 0.0,
            exposure_gain: 1.0,
            seed: 0,
        }
    }
}

impl CameraModel {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("pixel_scale", self.pixel_scale)?;
        ensure_nonnegative("read_noise", self.read_noise)?;
        ensure_nonnegative("exposure_gain", self.exposure_gain)?;
        if self.sensor.0 < 2 || self.sensor.1 < 1 {
            return Err(Error::Config(format!(
                "sensor must be at least 2x1 pixels, got {}x{}",
                self.sensor.0, self.sensor.1
            )));
        }
        Ok(())
    }

    /// Gain that maps `max_intensity` to the top count of the bit depth.
    pub fn with_full_scale(mut self, max_intensity: f64) -> Self {
        self.exposure_gain = self.bit_depth.max_value() as f64 / max_intensity;
        self
    }

    pub fn pixel_x(&self, i: usize) -> f64 {
        (i as f64 - 0.5 * (self.sensor.0 as f64 - 1.0)) * self.pixel_scale
    }

    pub fn pixel_y(&self, j: usize) -> f64 {
        (j as f64 - 0.5 * (self.sensor.1 as f64 - 1.0)) * self.pixel_scale
    }

    /// Focal-plane extent spanned by the pixel centers.
    pub fn field_of_view(&self) -> (f64, f64) {
        (
            (self.sensor.0 as f64 - 1.0) * self.pixel_scale,
            (self.sensor.1 as f64 - 1.0) * self.pixel_scale,
        )
    }

    /// Grid whose nodes coincide with the pixel centers. A sensor one pixel
    /// tall is sampled by a two-row grid straddling it.
    pub fn grid(&self) -> Result<GridSpec> {
        let (w, h) = self.field_of_view();
        let ny = self.sensor.1.max(2);
        let h = if self.sensor.1 < 2 {
            self.pixel_scale
        } else {
            h
        };
        GridSpec::new(w, h, self.sensor.0, ny)
    }

    fn noise_rng(&self, frame_index: u64) -> ChaCha8Rng {
        let key = self.seed ^ frame_index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        ChaCha8Rng::seed_from_u64(key)
    }
}

/// Converts focal-plane intensity into counts:
/// `clamp(round(gain * I + noise), 0, 2^bits - 1)`.
///
/// Intensity is resampled bilinearly at each pixel center; the noise stream
/// depends only on `(cam.seed, frame_index)`.
pub fn render_frame(
    frame: &IntensityFrame,
    cam: &CameraModel,
    frame_index: u64,
) -> Result<GrayImage> {
    cam.validate()?;
    let (fov_w, fov_h) = cam.field_of_view();
    let (ext_w, ext_h) = frame.grid().extent();
    let tol = 1e-9 * ext_w.max(ext_h);
    if fov_w > ext_w + tol {
        return Err(Error::FieldOfView {
            axis: 'x',
            fov: fov_w,
            extent: ext_w,
        });
    }
    if fov_h > ext_h + tol {
        return Err(Error::FieldOfView {
            axis: 'y',
            fov: fov_h,
            extent: ext_h,
        });
    }

    let (nx, ny) = cam.sensor;
    let direct = cam.grid().ok().as_ref() == Some(frame.grid()) && ny >= 2;
    let mut intensity = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let v = if direct {
                frame.get(i, j)
            } else {
                frame
                    .sample(cam.pixel_x(i), cam.pixel_y(j))
                    .ok_or(Error::FieldOfView {
                        axis: 'x',
                        fov: fov_w,
                        extent: ext_w,
                    })?
            };
            intensity.push(v);
        }
    }

    let max = cam.bit_depth.max_value() as f64;
    let mut rng = cam.noise_rng(frame_index);
    let noise = if cam.read_noise > 0.0 {
        Some(Normal::new(0.0, cam.read_noise).expect("read noise validated"))
    } else {
        None
    };
    let pixels = intensity
        .into_iter()
        .map(|v| {
            let n = noise.as_ref().map_or(0.0, |d| d.sample(&mut rng));
            (cam.exposure_gain * v + n).round().clamp(0.0, max) as u16
        })
        .collect();
    GrayImage::new(nx, ny, cam.bit_depth, pixels)
}
