//! The accordion mechanism and the camera that records it.

mod camera;
mod drive;
mod sequence;

pub use camera::{render_frame, BitDepth, CameraModel, GrayImage, DEFAULT_PIXEL_SCALE};
pub use drive::{
    bs_translation_path_difference, bs_translation_sensitivity, mirror_to_separation, MirrorDrive,
    Sensitivity, Trajectory, TrajectorySample,
};
pub use sequence::{
    frame_file_name, render_sequence, spacetime_composite, ManifestRow, RenderedSequence,
};
