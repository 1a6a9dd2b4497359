//! `accordion`: simulate and analyze accordion-lattice experiments.

mod commands;
mod run_spec;

use std::path::PathBuf;
use std::process::ExitCode;

use accordion_core::presets::Preset;
use clap::{Args, Parser, Subcommand};

use commands::{usage, AnalyzeOptions, CmdResult};
use run_spec::RunSpec;

/// Overrides the default output directory of `accordion accordion`.
const OUT_DIR_ENV: &str = "ACCORDION_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "accordion-out";

#[derive(Parser)]
#[command(
    name = "accordion",
    version,
    about = "Two-beam accordion lattice: simulation and fringe analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice spacing and beam angle for a lens and beam separation.
    Spacing {
        /// Wavelength (um).
        #[arg(long)]
        wavelength: f64,
        /// Focal length (um).
        #[arg(long)]
        focal: f64,
        /// Beam separation at the lens (um).
        #[arg(long, required_unless_present = "target_spacing")]
        separation: Option<f64>,
        /// Report the separation that gives this spacing (um).
        #[arg(long)]
        target_spacing: Option<f64>,
    },
    /// Render a mirror sweep or separation series to frames, manifest and composite.
    Accordion(Box<AccordionArgs>),
    /// Measure period, center fringe and contrast of rendered or recorded frames.
    Analyze {
        /// Run directory or single P5 image.
        input: PathBuf,
        /// Focal-plane um per pixel; defaults to the run's run.cfg value.
        #[arg(long)]
        pixel_scale: Option<f64>,
        /// Rows averaged about the central row (default: a quarter of the height).
        #[arg(long)]
        window_rows: Option<usize>,
        /// Fit the pixel scale against the manifest separations.
        #[arg(long)]
        calibrate: bool,
        #[arg(long)]
        wavelength: Option<f64>,
        #[arg(long)]
        focal: Option<f64>,
        /// Directory for measurements.csv and calibration.csv (default: the input directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fringe shift caused by translating the beamsplitter.
    Sensitivity {
        /// Perpendicular beamsplitter deviation (um); repeat or comma-separate.
        #[arg(
            long = "deviation",
            required = true,
            value_delimiter = ',',
            allow_negative_numbers = true
        )]
        deviations: Vec<f64>,
        /// Lattice spacing (um).
        #[arg(long)]
        spacing: f64,
        #[arg(long, default_value_t = accordion_core::presets::WAVELENGTH)]
        wavelength: f64,
    },
}

#[derive(Args)]
struct AccordionArgs {
    /// fig4a, fig4b, fig6a or fig6b (default fig6b).
    #[arg(long)]
    preset: Option<String>,
    /// key=value file applied over the preset; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default: $ACCORDION_OUT_DIR, else ./accordion-out).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    wavelength: Option<f64>,
    #[arg(long)]
    focal: Option<f64>,
    /// Fixed separations (um), one frame each.
    #[arg(long, value_delimiter = ',')]
    separations: Option<Vec<f64>>,
    #[arg(long)]
    initial_separation: Option<f64>,
    /// Mirror speed (um/s).
    #[arg(long)]
    speed: Option<f64>,
    /// Mirror travel (um).
    #[arg(long)]
    travel: Option<f64>,
    /// Pause at the far end (s).
    #[arg(long)]
    dwell: Option<f64>,
    #[arg(long)]
    frame_rate: Option<f64>,
    /// Focal waist of both beams (um).
    #[arg(long)]
    waist: Option<f64>,
    #[arg(long)]
    waist_plus: Option<f64>,
    #[arg(long)]
    waist_minus: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    path_difference: Option<f64>,
    #[arg(long)]
    pixel_scale: Option<f64>,
    #[arg(long)]
    sensor_width: Option<usize>,
    #[arg(long)]
    sensor_height: Option<usize>,
    #[arg(long)]
    bit_depth: Option<u32>,
    #[arg(long)]
    read_noise: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

impl AccordionArgs {
    fn flag_pairs(&self) -> Vec<(String, String)> {
        let mut pairs: Vec<(&str, Option<String>)> = vec![
            ("preset", self.preset.clone()),
            ("wavelength", self.wavelength.map(|v| v.to_string())),
            ("focal", self.focal.map(|v| v.to_string())),
            (
                "separations",
                self.separations
                    .as_ref()
                    .map(|v| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")),
            ),
            (
                "initial_separation",
                self.initial_separation.map(|v| v.to_string()),
            ),
            ("speed", self.speed.map(|v| v.to_string())),
            ("travel", self.travel.map(|v| v.to_string())),
            ("dwell", self.dwell.map(|v| v.to_string())),
            ("frame_rate", self.frame_rate.map(|v| v.to_string())),
            ("waist", self.waist.map(|v| v.to_string())),
            ("waist_plus", self.waist_plus.map(|v| v.to_string())),
            ("waist_minus", self.waist_minus.map(|v| v.to_string())),
            (
                "path_difference",
                self.path_difference.map(|v| v.to_string()),
            ),
            ("pixel_scale", self.pixel_scale.map(|v| v.to_string())),
            ("sensor_width", self.sensor_width.map(|v| v.to_string())),
            ("sensor_height", self.sensor_height.map(|v| v.to_string())),
            ("bit_depth", self.bit_depth.map(|v| v.to_string())),
            ("read_noise", self.read_noise.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
        ];
        pairs
            .drain(..)
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
            .collect()
    }
}

fn accordion(args: &AccordionArgs) -> CmdResult {
    let mut pairs = match &args.config {
        Some(path) => RunSpec::read_config(path).map_err(usage)?,
        None => Vec::new(),
    };
    pairs.extend(args.flag_pairs());
    let spec = RunSpec::resolve(Preset::Fig6b, &pairs).map_err(usage)?;
    let out = args.out.clone().unwrap_or_else(|| {
        std::env::var_os(OUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    });
    commands::accordion(&spec, &out)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Spacing {
            wavelength,
            focal,
            separation,
            target_spacing,
        } => commands::spacing(wavelength, focal, separation, target_spacing),
        Command::Accordion(args) => accordion(&args),
        Command::Analyze {
            input,
            pixel_scale,
            window_rows,
            calibrate,
            wavelength,
            focal,
            out,
        } => commands::analyze(
            &input,
            &AnalyzeOptions {
                pixel_scale,
                wavelength,
                focal,
                window_rows,
                calibrate,
                out,
            },
        ),
        Command::Sensitivity {
            deviations,
            spacing,
            wavelength,
        } => commands::sensitivity(&deviations, spacing, wavelength),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
