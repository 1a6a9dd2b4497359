//! Named parameter sets for the standard experiments.

use crate::error::{Error, Result};
use crate::field::{BeamSpec, LatticeConfig};
use crate::geometry::OpticalParams;
use crate::instrument::{CameraModel, MirrorDrive, Trajectory};

pub const WAVELENGTH: f64 = 0.532;
pub const SHORT_FOCAL_LENGTH: f64 = 30_000.0;
pub const LONG_FOCAL_LENGTH: f64 = 80_000.0;
pub const FIG4A_SEPARATION: f64 = 19_250.0;
/// Separations of the spacing-versus-separation sweep at the short lens.
pub const FIG4B_SEPARATIONS: [f64; 6] = [5_000.0, 8_000.0, 11_000.0, 14_000.0, 17_000.0, 19_250.0];
/// Knife-edge waists of the two beams at the short lens focus.
pub const SHORT_LENS_WAISTS: (f64, f64) = (36.0, 40.0);
/// Focal waist assumed for the long lens, scaled from the short-lens waists
/// by the focal-length ratio.
pub const LONG_LENS_WAIST: f64 = 100.0;
pub const SWEEP_START_SEPARATION: f64 = 43_810.0;
pub const SWEEP_END_SEPARATION: f64 = 3_790.0;
pub const MIRROR_TRAVEL: f64 = 20_000.0;
pub const FRAME_RATE: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Single frame at D = 19.25 mm behind the 30 mm lens.
    Fig4a,
    /// Stepped separation sweep behind the 30 mm lens.
    Fig4b,
    /// Accordion sweep behind the 80 mm lens, mirror at 10 mm/s.
    Fig6a,
    /// Accordion sweep behind the 80 mm lens, mirror at 20 mm/s.
    Fig6b,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Fig4a, Preset::Fig4b, Preset::Fig6a, Preset::Fig6b];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig4a => "fig4a",
            Preset::Fig4b => "fig4b",
            Preset::Fig6a => "fig6a",
            Preset::Fig6b => "fig6b",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown preset `{name}` (fig4a, fig4b, fig6a, fig6b)"
                ))
            })
    }

    pub fn focal_length(self) -> f64 {
        match self {
            Preset::Fig4a | Preset::Fig4b => SHORT_FOCAL_LENGTH,
            Preset::Fig6a | Preset::Fig6b => LONG_FOCAL_LENGTH,
        }
    }

    pub fn waists(self) -> (f64, f64) {
        match self {
            Preset::Fig4a | Preset::Fig4b => SHORT_LENS_WAISTS,
            Preset::Fig6a | Preset::Fig6b => (LONG_LENS_WAIST, LONG_LENS_WAIST),
        }
    }

    /// Mirror drive for the accordion presets.
    pub fn drive(self) -> Option<MirrorDrive> {
        let speed = match self {
            Preset::Fig6a => 10_000.0,
            Preset::Fig6b => 20_000.0,
            _ => return None,
        };
        Some(MirrorDrive {
            initial_separation: SWEEP_START_SEPARATION,
            speed,
            travel: MIRROR_TRAVEL,
            dwell: 0.5,
            frame_rate: FRAME_RATE,
        })
    }

    /// Beam separations for the stepped presets.
    pub fn separations(self) -> Option<Vec<f64>> {
        match self {
            Preset::Fig4a => Some(vec![FIG4A_SEPARATION]),
            Preset::Fig4b => Some(FIG4B_SEPARATIONS.to_vec()),
            _ => None,
        }
    }

    pub fn trajectory(self) -> Result<Trajectory> {
        match (self.drive(), self.separations()) {
            (Some(drive), _) => Trajectory::build(&drive),
            (None, Some(seps)) => Trajectory::from_separations(&seps, FRAME_RATE),
            (None, None) => unreachable!("every preset has a drive or a separation list"),
        }
    }

    /// Lattice at the first trajectory sample, unit field amplitudes.
    pub fn lattice(self) -> Result<LatticeConfig> {
        let first = self.trajectory()?.samples()[0].separation;
        let optics = OpticalParams::new(WAVELENGTH, self.focal_length(), first)?;
        let (w1, w2) = self.waists();
        LatticeConfig::new(
            optics,
            BeamSpec::new(w1, 1.0)?,
            BeamSpec::new(w2, 1.0)?,
            0.0,
        )
    }

    /// Default camera with the gain mapping the peak of two unit beams to full
    /// scale.
    pub fn camera(self) -> CameraModel {
        CameraModel::default().with_full_scale(4.0)
    }
}
