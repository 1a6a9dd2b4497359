//! Mirror translation and the separation schedule it produces.

use crate::error::{ensure_nonnegative, ensure_positive, Error, Result};

/// Beam separation after the mirror has moved `mirror_displacement` toward
/// the other beam. The retroreflecting mount doubles the lateral shift, so
/// `D = D0 - 2 m`.
pub fn mirror_to_separation(mirror_displacement: f64, initial_separation: f64) -> Result<f64> {
    let d = initial_separation - 2.0 * mirror_displacement;
    if d.is_finite() && d > 0.0 {
        Ok(d)
    } else {
        Err(Error::Domain {
            name: "separation",
            value: d,
            reason: "mirror displacement drives the beam separation to <= 0",
        })
    }
}

/// Path-length change between the beams when both beamsplitters are
/// translated together and the stage wanders `perpendicular_deviation` off
/// its axis: twice the deviation, sign preserved.
pub fn bs_translation_path_difference(perpendicular_deviation: f64) -> f64 {
    2.0 * perpendicular_deviation
}

/// Fringe shift caused by a perpendicular stage deviation in the
/// beamsplitter-translation scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sensitivity {
    pub deviation: f64,
    pub path_difference: f64,
    /// Shift in units of the lattice period, `2 δ / λ`.
    pub fringes: f64,
    /// Shift in µm at the requested spacing.
    pub shift: f64,
}

pub fn bs_translation_sensitivity(
    deviation: f64,
    wavelength: f64,
    spacing: f64,
) -> Result<Sensitivity> {
    ensure_positive("wavelength", wavelength)?;
    ensure_positive("spacing", spacing)?;
    if !deviation.is_finite() {
        return Err(Error::Domain {
            name: "deviation",
            value: deviation,
            reason: "must be finite",
        });
    }
    let path_difference = bs_translation_path_difference(deviation);
    let fringes = path_difference / wavelength;
    Ok(Sensitivity {
        deviation,
        path_difference,
        fringes,
        shift: fringes * spacing,
    })
}

/// Constant-velocity out-and-back motion of the translation mirror.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorDrive {
    /// Beam separation before the mirror moves (µm).
    pub initial_separation: f64,
    /// Mirror speed (µm/s).
    pub speed: f64,
    /// One-way mirror travel (µm).
    pub travel: f64,
    /// Pause at the far end (s).
    pub dwell: f64,
    /// Camera frame rate (frames/s).
    pub frame_rate: f64,
}

impl MirrorDrive {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("initial_separation", self.initial_separation)?;
        ensure_positive("speed", self.speed)?;
        ensure_positive("travel", self.travel)?;
        ensure_nonnegative("dwell", self.dwell)?;
        ensure_positive("frame_rate", self.frame_rate)?;
        if self.initial_separation - 2.0 * self.travel <= 0.0 {
            return Err(Error::Domain {
                name: "travel",
                value: self.travel,
                reason: "initial_separation - 2 * travel must stay > 0",
            });
        }
        Ok(())
    }

    pub fn out_duration(&self) -> f64 {
        self.travel / self.speed
    }

    pub fn duration(&self) -> f64 {
        2.0 * self.out_duration() + self.dwell
    }

    /// Mirror displacement from its start position at time `t`.
    pub fn mirror_position(&self, t: f64) -> f64 {
        let t_out = self.out_duration();
        if t <= t_out {
            self.speed * t.max(0.0)
        } else if t <= t_out + self.dwell {
            self.travel
        } else {
            (self.travel - self.speed * (t - t_out - self.dwell)).max(0.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub time: f64,
    pub mirror_position: f64,
    pub separation: f64,
    pub path_difference: f64,
}

/// Frame-synchronous schedule of mirror positions and beam separations.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    frame_rate: f64,
    samples: Vec<TrajectorySample>,
}

impl Trajectory {
    /// Samples `drive` at its frame rate from `t = 0` through the end of the
    /// return stroke, both endpoints included. The mirror scheme leaves the
    /// optical path difference at zero throughout.
    pub fn build(drive: &MirrorDrive) -> Result<Self> {
        drive.validate()?;
        let total = drive.duration();
        let last = (total * drive.frame_rate + 1e-9).floor() as usize;
        let samples = (0..=last)
            .map(|k| {
                let time = k as f64 / drive.frame_rate;
                let mirror_position = drive.mirror_position(time);
                let separation = mirror_to_separation(mirror_position, drive.initial_separation)?;
                Ok(TrajectorySample {
                    time,
                    mirror_position,
                    separation,
                    path_difference: 0.0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            frame_rate: drive.frame_rate,
            samples,
        })
    }

    /// One frame per listed separation, e.g. a stepped calibration sweep.
    /// Mirror positions are measured from the first entry.
    pub fn from_separations(separations: &[f64], frame_rate: f64) -> Result<Self> {
        ensure_positive("frame_rate", frame_rate)?;
        let first = *separations
            .first()
            .ok_or_else(|| Error::Config("separation list is empty".into()))?;
        let samples = separations
            .iter()
            .enumerate()
            .map(|(k, &separation)| {
                ensure_positive("separation", separation)?;
                Ok(TrajectorySample {
                    time: k as f64 / frame_rate,
                    mirror_position: 0.5 * (first - separation),
                    separation,
                    path_difference: 0.0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            frame_rate,
            samples,
        })
    }

    /// Sets every sample's path difference from a function of time.
    pub fn with_path_difference(mut self, f: impl Fn(f64) -> f64) -> Self {
        for s in &mut self.samples {
            s.path_difference = f(s.time);
        }
        self
    }

    pub fn frame_rate(&self) -> f64 {
        self.frame_rate
    }

    pub fn samples(&self) -> &[TrajectorySample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}
