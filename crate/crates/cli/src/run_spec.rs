//! Resolved parameters of an `accordion` run.
//!
//! Values are layered: preset defaults, then a `key=value` config file, then
//! command-line flags. The resolved spec is echoed to `run.cfg` in the same
//! format, so `--config run.cfg` replays a run.

use std::path::Path;

use accordion_core::instrument::BitDepth;
use accordion_core::io::read_key_values;
use accordion_core::presets::{self, Preset};
use accordion_core::{
    BeamSpec, CameraModel, Error, LatticeConfig, MirrorDrive, OpticalParams, Result, Trajectory,
};

#[derive(Debug, Clone, PartialEq)]
pub enum Motion {
    /// One frame per separation.
    Steps(Vec<f64>),
    Sweep {
        initial_separation: f64,
        speed: f64,
        travel: f64,
        dwell: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub preset: Preset,
    pub wavelength: f64,
    pub focal: f64,
    pub motion: Motion,
    pub frame_rate: f64,
    pub waist_plus: f64,
    pub waist_minus: f64,
    pub path_difference: f64,
    pub pixel_scale: f64,
    pub sensor_width: usize,
    pub sensor_height: usize,
    pub bit_depth: u32,
    pub read_noise: f64,
    pub seed: u64,
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("cannot parse `{value}` for `{key}`")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value.split(',').map(|v| parse(key, v)).collect()
}

impl RunSpec {
    pub fn from_preset(preset: Preset) -> Self {
        let motion = match (preset.drive(), preset.separations()) {
            (Some(d), _) => Motion::Sweep {
                initial_separation: d.initial_separation,
                speed: d.speed,
                travel: d.travel,
                dwell: d.dwell,
            },
            (None, Some(seps)) => Motion::Steps(seps),
            (None, None) => unreachable!("every preset has a drive or a separation list"),
        };
        let (waist_plus, waist_minus) = preset.waists();
        let cam = CameraModel::default();
        Self {
            preset,
            wavelength: presets::WAVELENGTH,
            focal: preset.focal_length(),
            motion,
            frame_rate: presets::FRAME_RATE,
            waist_plus,
            waist_minus,
            path_difference: 0.0,
            pixel_scale: cam.pixel_scale,
            sensor_width: cam.sensor.0,
            sensor_height: cam.sensor.1,
            bit_depth: cam.bit_depth.bits(),
            read_noise: cam.read_noise,
            seed: cam.seed,
        }
    }

    /// Preset named by `preset` in `overrides` (or `default`), with every
    /// other pair applied on top in order.
    pub fn resolve(default: Preset, overrides: &[(String, String)]) -> Result<Self> {
        let preset = match overrides.iter().rev().find(|(k, _)| k == "preset") {
            Some((_, v)) => Preset::parse(v)?,
            None => default,
        };
        let mut spec = Self::from_preset(preset);
        for (k, v) in overrides {
            spec.set(k, v)?;
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn read_config(path: &Path) -> Result<Vec<(String, String)>> {
        read_key_values(path)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "preset" => {}
            "wavelength" => self.wavelength = parse(key, value)?,
            "focal" => self.focal = parse(key, value)?,
            "separations" => self.motion = Motion::Steps(parse_list(key, value)?),
            "initial_separation" | "speed" | "travel" | "dwell" => {
                let Motion::Sweep {
                    initial_separation,
                    speed,
                    travel,
                    dwell,
                } = &mut self.motion
                else {
                    return Err(Error::Config(format!(
                        "`{key}` applies to mirror sweeps, but this run steps through fixed separations"
                    )));
                };
                let slot = match key {
                    "initial_separation" => initial_separation,
                    "speed" => speed,
                    "travel" => travel,
                    _ => dwell,
                };
                *slot = parse(key, value)?;
            }
            "frame_rate" => self.frame_rate = parse(key, value)?,
            "waist" => {
                self.waist_plus = parse(key, value)?;
                self.waist_minus = self.waist_plus;
            }
            "waist_plus" => self.waist_plus = parse(key, value)?,
            "waist_minus" => self.waist_minus = parse(key, value)?,
            "path_difference" => self.path_difference = parse(key, value)?,
            "pixel_scale" => self.pixel_scale = parse(key, value)?,
            "sensor_width" => self.sensor_width = parse(key, value)?,
            "sensor_height" => self.sensor_height = parse(key, value)?,
            "bit_depth" => self.bit_depth = parse(key, value)?,
            "read_noise" => self.read_noise = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            _ => return Err(Error::Config(format!("unknown parameter `{key}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.lattice()?;
        self.trajectory()?;
        self.camera()?.validate()
    }

    pub fn trajectory(&self) -> Result<Trajectory> {
        let traj = match &self.motion {
            Motion::Steps(seps) => Trajectory::from_separations(seps, self.frame_rate)?,
            Motion::Sweep {
                initial_separation,
                speed,
                travel,
                dwell,
            } => Trajectory::build(&MirrorDrive {
                initial_separation: *initial_separation,
                speed: *speed,
                travel: *travel,
                dwell: *dwell,
                frame_rate: self.frame_rate,
            })?,
        };
        let pd = self.path_difference;
        Ok(traj.with_path_difference(|_| pd))
    }

    /// Lattice at the first separation; the sequence renderer substitutes
    /// each frame's own separation.
    pub fn lattice(&self) -> Result<LatticeConfig> {
        let first = match &self.motion {
            Motion::Steps(seps) => *seps
                .first()
                .ok_or_else(|| Error::Config("separation list is empty".into()))?,
            Motion::Sweep {
                initial_separation, ..
            } => *initial_separation,
        };
        let optics = OpticalParams::new(self.wavelength, self.focal, first)?;
        LatticeConfig::new(
            optics,
            BeamSpec::new(self.waist_plus, 1.0)?,
            BeamSpec::new(self.waist_minus, 1.0)?,
            self.path_difference,
        )
    }

    /// Camera with the peak of two unit beams at full scale.
    pub fn camera(&self) -> Result<CameraModel> {
        let cam = CameraModel {
            pixel_scale: self.pixel_scale,
            sensor: (self.sensor_width, self.sensor_height),
            bit_depth: BitDepth::from_bits(self.bit_depth)?,
            read_noise: self.read_noise,
            exposure_gain: 1.0,
            seed: self.seed,
        }
        .with_full_scale(4.0);
        cam.validate()?;
        Ok(cam)
    }

    pub fn to_pairs(&self) -> Vec<(String, String)> {
        let mut pairs = vec![
            ("preset", self.preset.name().to_string()),
            ("wavelength", self.wavelength.to_string()),
            ("focal", self.focal.to_string()),
        ];
        match &self.motion {
            Motion::Steps(seps) => {
                let list: Vec<String> = seps.iter().map(f64::to_string).collect();
                pairs.push(("separations", list.join(",")));
            }
            Motion::Sweep {
                initial_separation,
                speed,
                travel,
                dwell,
            } => {
                pairs.push(("initial_separation", initial_separation.to_string()));
                pairs.push(("speed", speed.to_string()));
                pairs.push(("travel", travel.to_string()));
                pairs.push(("dwell", dwell.to_string()));
            }
        }
        pairs.extend([
            ("frame_rate", self.frame_rate.to_string()),
            ("waist_plus", self.waist_plus.to_string()),
            ("waist_minus", self.waist_minus.to_string()),
            ("path_difference", self.path_difference.to_string()),
            ("pixel_scale", self.pixel_scale.to_string()),
            ("sensor_width", self.sensor_width.to_string()),
            ("sensor_height", self.sensor_height.to_string()),
            ("bit_depth", self.bit_depth.to_string()),
            ("read_noise", self.read_noise.to_string()),
            ("seed", self.seed.to_string()),
        ]);
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}
