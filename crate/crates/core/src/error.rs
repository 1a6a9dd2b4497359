use std::path::PathBuf;

/// Errors produced by the simulator and the analysis pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter lies outside the domain of the model.
    #[error("invalid {name} = {value}: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    /// The spectrum shows no fringe peak above the noise floor.
    #[error("no fringe found (peak {peak_db:.1} dB above median spectrum)")]
    NoFringe { peak_db: f64 },

    #[error("too few fringe periods in the image ({periods:.2} < 3)")]
    TooFewPeriods { periods: f64 },

    #[error("ill-conditioned calibration: {0}")]
    IllConditioned(String),

    #[error("fit failed: {0}")]
    FitFailed(String),

    /// Consecutive center-fringe positions jumped by more than a quarter period.
    #[error("unwrap failure at frame {frame}: jump of {jump:.3} px exceeds d/4 = {limit:.3} px")]
    Unwrap { frame: usize, jump: f64, limit: f64 },

    #[error("camera field of view {fov:.3} um exceeds grid extent {extent:.3} um along {axis}")]
    FieldOfView { axis: char, fov: f64, extent: f64 },

    #[error("frame {index}: {source}")]
    Frame {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn ensure_nonnegative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}
