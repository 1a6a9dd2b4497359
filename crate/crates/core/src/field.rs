//! Complex fields and interference intensity at the back focal plane.
//!
//! A collimated beam displaced by `±D/2` from the lens axis arrives at the
//! focal plane with a linear phase tilt `exp(∓j π D x / (λ f))` on top of its
//! focal envelope. Two such beams interfere into fringes of period `λ f / D`
//! whose position is set only by their optical path difference.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{ensure_nonnegative, ensure_positive, Error, Result};
use crate::geometry::OpticalParams;

/// Minimum grid samples per fringe period accepted by
/// [`interference_intensity`].
pub const MIN_SAMPLES_PER_FRINGE: f64 = 4.0;

/// Uniform sampling of the focal plane, centered on the lens axis.
///
/// Node `i` along x sits at `-width/2 + i * width / (nx - 1)`, so the first and
/// last nodes lie exactly on the edges of the extent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    width: f64,
    height: f64,
    nx: usize,
    ny: usize,
}

impl GridSpec {
    pub fn new(width: f64, height: f64, nx: usize, ny: usize) -> Result<Self> {
        ensure_positive("grid width", width)?;
        ensure_positive("grid height", height)?;
        if nx < 2 || ny < 2 {
            return Err(Error::Config(format!(
                "grid needs at least 2x2 samples, got {nx}x{ny}"
            )));
        }
        Ok(Self {
            width,
            height,
            nx,
            ny,
        })
    }

    /// 1024 x 256 samples spanning four times the larger focal waist in x and
    /// twice it in y.
    pub fn default_for(cfg: &LatticeConfig) -> Self {
        let w = cfg.beam_plus.focal_waist.max(cfg.beam_minus.focal_waist);
        Self {
            width: 4.0 * w,
            height: 2.0 * w,
            nx: 1024,
            ny: 256,
        }
    }

    pub fn extent(&self) -> (f64, f64) {
        (self.width, self.height)
    }

    pub fn samples(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.width / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        self.height / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -0.5 * self.width + i as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        -0.5 * self.height + j as f64 * self.dy()
    }

    /// True when the grid reaches at least one waist from the beam center in
    /// every direction.
    pub fn covers(&self, beam: &BeamSpec) -> bool {
        let (cx, cy) = beam.center_offset;
        let w = beam.focal_waist;
        cx - w >= -0.5 * self.width
            && cx + w <= 0.5 * self.width
            && cy - w >= -0.5 * self.height
            && cy + w <= 0.5 * self.height
    }
}

/// Gaussian beam as it appears at the focal plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSpec {
    /// 1/e² intensity radius at the focal plane (µm).
    pub focal_waist: f64,
    /// Peak field amplitude.
    pub amplitude: f64,
    /// Envelope center (µm).
    pub center_offset: (f64, f64),
}

impl BeamSpec {
    pub fn new(focal_waist: f64, amplitude: f64) -> Result<Self> {
        ensure_positive("focal_waist", focal_waist)?;
        ensure_nonnegative("amplitude", amplitude)?;
        Ok(Self {
            focal_waist,
            amplitude,
            center_offset: (0.0, 0.0),
        })
    }

    pub fn with_center(mut self, x: f64, y: f64) -> Self {
        self.center_offset = (x, y);
        self
    }

    fn validate(&self) -> Result<()> {
        ensure_positive("focal_waist", self.focal_waist)?;
        ensure_nonnegative("amplitude", self.amplitude)?;
        if !(self.center_offset.0.is_finite() && self.center_offset.1.is_finite()) {
            return Err(Error::Config("beam center must be finite".into()));
        }
        Ok(())
    }

    /// Unit-peak intensity envelope `exp(-2 r² / w²)`.
    pub fn envelope(&self, x: f64, y: f64) -> f64 {
        let dx = x - self.center_offset.0;
        let dy = y - self.center_offset.1;
        (-2.0 * (dx * dx + dy * dy) / (self.focal_waist * self.focal_waist)).exp()
    }

    /// Real field amplitude `A exp(-r² / w²)`.
    pub fn field(&self, x: f64, y: f64) -> f64 {
        self.amplitude * self.envelope(x, y).sqrt()
    }
}

/// Everything the focal-plane interference pattern depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeConfig {
    pub optics: OpticalParams,
    /// Beam entering the lens at `+D/2`.
    pub beam_plus: BeamSpec,
    /// Beam entering the lens at `-D/2`.
    pub beam_minus: BeamSpec,
    /// Optical path length of `beam_plus` minus that of `beam_minus` (µm).
    pub path_difference: f64,
}

impl LatticeConfig {
    pub fn new(
        optics: OpticalParams,
        beam_plus: BeamSpec,
        beam_minus: BeamSpec,
        path_difference: f64,
    ) -> Result<Self> {
        let cfg = Self {
            optics,
            beam_plus,
            beam_minus,
            path_difference,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Two identical beams with equal path lengths.
    pub fn symmetric(optics: OpticalParams, beam: BeamSpec) -> Result<Self> {
        Self::new(optics, beam, beam, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        self.beam_plus.validate()?;
        self.beam_minus.validate()?;
        if !(self.beam_plus.amplitude > 0.0 || self.beam_minus.amplitude > 0.0) {
            return Err(Error::Config(
                "at least one beam amplitude must be > 0".into(),
            ));
        }
        if !self.path_difference.is_finite() {
            return Err(Error::Domain {
                name: "path_difference",
                value: self.path_difference,
                reason: "must be finite",
            });
        }
        Ok(())
    }

    pub fn with_separation(&self, separation: f64) -> Result<Self> {
        Ok(Self {
            optics: self.optics.with_separation(separation)?,
            ..*self
        })
    }

    pub fn with_path_difference(&self, path_difference: f64) -> Result<Self> {
        let cfg = Self {
            path_difference,
            ..*self
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn spacing(&self) -> f64 {
        self.optics.spacing_fourier()
    }

    /// Interference phase `2π ΔL / λ` contributed by the path difference.
    pub fn path_phase(&self) -> f64 {
        2.0 * PI * self.path_difference / self.optics.wavelength()
    }

    /// Power ratio of the weaker beam to the stronger one (peak intensities).
    pub fn power_ratio(&self) -> f64 {
        let a = self.beam_plus.amplitude.powi(2);
        let b = self.beam_minus.amplitude.powi(2);
        a.min(b) / a.max(b)
    }

    /// Intensity at one point of the focal plane.
    pub fn intensity_at(&self, x: f64, y: f64) -> f64 {
        let a1 = self.beam_plus.amplitude;
        let a2 = self.beam_minus.amplitude;
        let g1 = self.beam_plus.envelope(x, y);
        let g2 = self.beam_minus.envelope(x, y);
        let k = 2.0 * PI * self.optics.fringe_frequency();
        let cross = 2.0 * a1 * a2 * (g1 * g2).sqrt() * (k * x + self.path_phase()).cos();
        // the three terms can cancel to a tiny negative through rounding
        (a1 * a1 * g1 + a2 * a2 * g2 + cross).max(0.0)
    }
}

/// Sampled complex amplitude on a [`GridSpec`], row-major with x fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl FieldGrid {
    pub fn new(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Config(format!(
                "field has {} values for a {}x{} grid",
                values.len(),
                grid.nx,
                grid.ny
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * self.grid.nx + i]
    }

    /// Multiplies every sample by the same complex factor.
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// Multiplies sample-by-sample with `mask`, which must share the grid.
    pub fn modulated(&self, mask: &[Complex64]) -> Result<Self> {
        if mask.len() != self.values.len() {
            return Err(Error::Config("mask length does not match the grid".into()));
        }
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(mask).map(|(v, m)| v * m).collect(),
        })
    }

    pub fn intensity(&self) -> IntensityFrame {
        IntensityFrame {
            grid: self.grid,
            values: self.values.iter().map(|v| v.norm_sqr()).collect(),
        }
    }
}

/// Nonnegative intensity samples on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityFrame {
    grid: GridSpec,
    values: Vec<f64>,
}

impl IntensityFrame {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Config(format!(
                "frame has {} values for a {}x{} grid",
                values.len(),
                grid.nx,
                grid.ny
            )));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::Domain {
                name: "intensity",
                value: *v,
                reason: "must be finite and >= 0",
            });
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.nx + i]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.grid.nx..(j + 1) * self.grid.nx]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Trapezoidal integral over the grid area.
    pub fn integrate(&self) -> f64 {
        let (nx, ny) = self.grid.samples();
        let mut total = 0.0;
        for j in 0..ny {
            let wy = if j == 0 || j == ny - 1 { 0.5 } else { 1.0 };
            let row = self.row(j);
            let mut s = 0.0;
            for (i, v) in row.iter().enumerate() {
                let wx = if i == 0 || i == nx - 1 { 0.5 } else { 1.0 };
                s += wx * v;
            }
            total += wy * s;
        }
        total * self.grid.dx() * self.grid.dy()
    }

    /// Bilinear interpolation at `(x, y)`; `None` outside the grid.
    pub fn sample(&self, x: f64, y: f64) -> Option<f64> {
        let (w, h) = self.grid.extent();
        let (nx, ny) = self.grid.samples();
        let fx = (x + 0.5 * w) / self.grid.dx();
        let fy = (y + 0.5 * h) / self.grid.dy();
        let eps = 1e-9;
        if fx < -eps || fy < -eps || fx > (nx - 1) as f64 + eps || fy > (ny - 1) as f64 + eps {
            return None;
        }
        let fx = fx.clamp(0.0, (nx - 1) as f64);
        let fy = fy.clamp(0.0, (ny - 1) as f64);
        let i0 = (fx.floor() as usize).min(nx - 2);
        let j0 = (fy.floor() as usize).min(ny - 2);
        let tx = fx - i0 as f64;
        let ty = fy - j0 as f64;
        let v00 = self.get(i0, j0);
        let v10 = self.get(i0 + 1, j0);
        let v01 = self.get(i0, j0 + 1);
        let v11 = self.get(i0 + 1, j0 + 1);
        Some((1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11))
    }
}

/// Which of the two input beams a tilt belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftSign {
    /// Displaced by `+D/2`; tilt `exp(-j π D x / (λ f))`.
    Plus,
    /// Displaced by `-D/2`; tilt `exp(+j π D x / (λ f))`.
    Minus,
}

impl ShiftSign {
    fn factor(self) -> f64 {
        match self {
            ShiftSign::Plus => -1.0,
            ShiftSign::Minus => 1.0,
        }
    }
}

fn build_rows<T, F>(grid: &GridSpec, f: F) -> Vec<T>
where
    T: Send + Default + Clone,
    F: Fn(f64, f64) -> T + Sync,
{
    let (nx, _) = grid.samples();
    let mut values = vec![T::default(); grid.len()];
    values.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
        let y = grid.y(j);
        for (i, v) in row.iter_mut().enumerate() {
            *v = f(grid.x(i), y);
        }
    });
    values
}

/// Intensity envelope `A² exp(-2 r² / w²)` of a single beam.
pub fn focal_envelope(beam: &BeamSpec, grid: &GridSpec) -> Result<IntensityFrame> {
    beam.validate()?;
    if !grid.covers(beam) {
        log::warn!(
            "grid {:?} does not cover one waist ({} um) around the beam center",
            grid.extent(),
            beam.focal_waist
        );
    }
    let a2 = beam.amplitude * beam.amplitude;
    let values = build_rows(grid, |x, y| a2 * beam.envelope(x, y));
    IntensityFrame::new(*grid, values)
}

/// Real focal-plane field `A exp(-r² / w²)` of a single, unshifted beam.
pub fn focal_field(beam: &BeamSpec, grid: &GridSpec) -> Result<FieldGrid> {
    beam.validate()?;
    let values = build_rows(grid, |x, y| Complex64::new(beam.field(x, y), 0.0));
    FieldGrid::new(*grid, values)
}

/// Applies the linear phase tilt a lateral input shift of `±D/2` produces at
/// the focal plane. The modulus of every sample is unchanged.
pub fn shifted_field(field: &FieldGrid, sign: ShiftSign, optics: &OpticalParams) -> FieldGrid {
    let grid = *field.grid();
    let k = sign.factor() * PI * optics.fringe_frequency();
    let (nx, _) = grid.samples();
    let values = field
        .values()
        .iter()
        .enumerate()
        .map(|(n, v)| v * Complex64::from_polar(1.0, k * grid.x(n % nx)))
        .collect();
    FieldGrid { grid, values }
}

/// The two tilted beam fields, with the path difference applied to the `+`
/// beam as `exp(-j 2π ΔL / λ)`.
pub fn beam_fields(cfg: &LatticeConfig, grid: &GridSpec) -> Result<(FieldGrid, FieldGrid)> {
    cfg.validate()?;
    let plus = shifted_field(
        &focal_field(&cfg.beam_plus, grid)?,
        ShiftSign::Plus,
        &cfg.optics,
    )
    .scaled(Complex64::from_polar(1.0, -cfg.path_phase()));
    let minus = shifted_field(
        &focal_field(&cfg.beam_minus, grid)?,
        ShiftSign::Minus,
        &cfg.optics,
    );
    Ok((plus, minus))
}

/// `|a + b|²` sample by sample.
pub fn superpose(a: &FieldGrid, b: &FieldGrid) -> Result<IntensityFrame> {
    if a.grid() != b.grid() {
        return Err(Error::Config("fields live on different grids".into()));
    }
    let values = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(u, v)| (u + v).norm_sqr())
        .collect();
    IntensityFrame::new(*a.grid(), values)
}

/// Closed-form two-beam interference pattern
/// `A1² G1 + A2² G2 + 2 A1 A2 sqrt(G1 G2) cos(2π D x / (λ f) + 2π ΔL / λ)`.
///
/// Fails when the grid resolves a fringe period with fewer than
/// [`MIN_SAMPLES_PER_FRINGE`] samples.
pub fn interference_intensity(cfg: &LatticeConfig, grid: &GridSpec) -> Result<IntensityFrame> {
    cfg.validate()?;
    let per_fringe = cfg.spacing() / grid.dx();
    if per_fringe < MIN_SAMPLES_PER_FRINGE {
        return Err(Error::Config(format!(
            "grid resolves the {:.4} um period with {per_fringe:.2} samples (< {MIN_SAMPLES_PER_FRINGE})",
            cfg.spacing()
        )));
    }
    let values = build_rows(grid, |x, y| cfg.intensity_at(x, y));
    IntensityFrame::new(*grid, values)
}

/// Unreduced position of the bright fringe belonging to zero interference
/// phase, `-ΔL f / D`, in µm.
pub fn center_fringe_shift(cfg: &LatticeConfig) -> f64 {
    -cfg.path_difference / cfg.optics.wavelength() * cfg.spacing()
}

/// Bright fringe nearest the lens axis, reduced into `(-d/2, d/2]`.
pub fn center_fringe_position(cfg: &LatticeConfig) -> f64 {
    let fringes = cfg.path_difference / cfg.optics.wavelength();
    let d = cfg.spacing();
    reduce_to_period(-fringes, 1.0) * d
}

/// Reduces `value` into `(-period/2, period/2]`.
pub fn reduce_to_period(value: f64, period: f64) -> f64 {
    value - period * (value / period - 0.5).ceil()
}

/// Michelson contrast `2 sqrt(r) / (1 + r)` of two coherent beams with power
/// ratio `r`.
pub fn fringe_contrast(power_ratio: f64) -> Result<f64> {
    ensure_nonnegative("power_ratio", power_ratio)?;
    if power_ratio.is_infinite() {
        return Ok(0.0);
    }
    Ok(2.0 * power_ratio.sqrt() / (1.0 + power_ratio))
}
