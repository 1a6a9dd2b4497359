//! Simulation and analysis of a two-beam "accordion" optical lattice.
//!
//! Two parallel beams separated by `D` are focused by a lens of focal length
//! `f`; at the focal plane they interfere into fringes of period `λ f / D`.
//! Translating one steering mirror changes `D`, and with it the period,
//! without changing the optical path difference between the beams.
//!
//! The crate covers both halves of that experiment:
//!
//! * [`geometry`], [`field`] and [`instrument`] synthesize focal-plane
//!   fields, camera frames and mirror sweeps;
//! * [`analysis`] recovers period, fringe position, contrast, pixel scale
//!   and beam waists from those frames.
//!
//! Lengths are micrometers throughout, angles radians.

pub mod analysis;
pub mod error;
pub mod field;
pub mod geometry;
pub mod instrument;
pub mod io;
pub mod presets;

pub use error::{Error, Result};
pub use field::{BeamSpec, FieldGrid, GridSpec, IntensityFrame, LatticeConfig};
pub use geometry::OpticalParams;
pub use instrument::{CameraModel, GrayImage, MirrorDrive, Trajectory};
