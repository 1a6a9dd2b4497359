use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::camera::{render_frame, CameraModel, GrayImage};
use super::drive::Trajectory;
use crate::error::{Error, Result};
use crate::field::{interference_intensity, LatticeConfig};

/// One line of the frame manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub frame: String,
    pub time_s: f64,
    pub mirror_um: f64,
    pub separation_um: f64,
    pub analytic_spacing_um: f64,
    pub path_difference_um: f64,
}

/// Frames rendered along a trajectory, with their manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedSequence {
    pub frames: Vec<GrayImage>,
    pub manifest: Vec<ManifestRow>,
}

pub fn frame_file_name(index: usize) -> String {
    format!("frame_{index:04}.pgm")
}

/// Renders one camera frame per trajectory sample, substituting the sample's
/// separation and path difference into `base`. Frames are rendered in
/// parallel; each uses its own sample index as the noise key.
pub fn render_sequence(
    trajectory: &Trajectory,
    base: &LatticeConfig,
    cam: &CameraModel,
) -> Result<RenderedSequence> {
    let grid = cam.grid()?;
    let rendered = trajectory
        .samples()
        .par_iter()
        .enumerate()
        .map(|(index, s)| {
            let wrap = |e: Error| Error::Frame {
                index,
                source: Box::new(e),
            };
            let cfg = base
                .with_separation(s.separation)
                .and_then(|c| c.with_path_difference(s.path_difference))
                .map_err(wrap)?;
            let intensity = interference_intensity(&cfg, &grid).map_err(wrap)?;
            let image = render_frame(&intensity, cam, index as u64).map_err(wrap)?;
            let row = ManifestRow {
                frame: frame_file_name(index),
                time_s: s.time,
                mirror_um: s.mirror_position,
                separation_um: s.separation,
                analytic_spacing_um: cfg.spacing(),
                path_difference_um: s.path_difference,
            };
            Ok((image, row))
        })
        .collect::<Result<Vec<_>>>()?;
    let (frames, manifest) = rendered.into_iter().unzip();
    Ok(RenderedSequence { frames, manifest })
}

/// Stacks the central row of each frame in time order into a
/// position-versus-time image.
pub fn spacetime_composite(frames: &[GrayImage]) -> Result<GrayImage> {
    if frames.len() < 2 {
        return Err(Error::Config(format!(
            "space-time composite needs at least 2 frames, got {}",
            frames.len()
        )));
    }
    let width = frames[0].width();
    let depth = frames[0].depth();
    let mut pixels = Vec::with_capacity(width * frames.len());
    for (k, f) in frames.iter().enumerate() {
        if f.width() != width || f.depth() != depth {
            return Err(Error::Config(format!(
                "frame {k} is {}px wide at {} bits, expected {width}px at {} bits",
                f.width(),
                f.depth().bits(),
                depth.bits()
            )));
        }
        pixels.extend_from_slice(f.row(f.center_row()));
    }
    GrayImage::new(width, frames.len(), depth, pixels)
}
