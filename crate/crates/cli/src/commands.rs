use std::fs;
use std::path::{Path, PathBuf};

use accordion_core::analysis::{
    calibrate_pixel_scale, measure_frames, track_center_fringe, CalibrationPoint,
    CenterObservation, FringeMeasurement,
};
use accordion_core::field::reduce_to_period;
use accordion_core::geometry::separation_for_spacing;
use accordion_core::instrument::{
    bs_translation_sensitivity, render_sequence, spacetime_composite, ManifestRow,
};
use accordion_core::io::{
    read_key_values, read_manifest, read_pgm, write_calibration_report, write_key_values,
    write_manifest, write_measurements, write_pgm, CalibrationRow, MeasurementRow,
};
use accordion_core::{GrayImage, OpticalParams};
use anyhow::Context;

use crate::run_spec::RunSpec;

/// Error carrying the process exit code: 1 for analysis failures, 2 for
/// usage and configuration errors.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

pub fn usage(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 2,
        error: error.into(),
    }
}

pub fn analysis(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: 1,
        error: error.into(),
    }
}

pub type CmdResult = std::result::Result<(), Failure>;

pub fn spacing(
    wavelength: f64,
    focal: f64,
    separation: Option<f64>,
    target: Option<f64>,
) -> CmdResult {
    println!("wavelength            {wavelength} um");
    println!("focal length          {focal} um");
    if let Some(sep) = separation {
        let p = OpticalParams::new(wavelength, focal, sep).map_err(usage)?;
        let (d6, d1) = (p.spacing_fourier(), p.spacing_thin_lens());
        println!("separation            {sep} um");
        println!("spacing (lambda f/D)  {d6:.4} um");
        println!("spacing (thin lens)   {d1:.4} um");
        println!("thin-lens / exact     {:.4}", d1 / d6);
        println!(
            "beam angle            {:.2} deg",
            p.beam_angle().to_degrees()
        );
        println!(
            "beam angle (thin)     {:.2} deg",
            p.beam_angle_thin_lens().to_degrees()
        );
    }
    if let Some(d) = target {
        let sep = separation_for_spacing(wavelength, focal, d).map_err(usage)?;
        println!("separation for {d} um  {sep:.1} um");
    }
    Ok(())
}

pub fn sensitivity(deviations: &[f64], spacing: f64, wavelength: f64) -> CmdResult {
    println!("deviation_um,path_difference_um,fringes,shift_um,mirror_scheme_shift_um");
    for &dev in deviations {
        let s = bs_translation_sensitivity(dev, wavelength, spacing).map_err(usage)?;
        println!(
            "{},{:.4},{:.4},{:.4},0",
            s.deviation, s.path_difference, s.fringes, s.shift
        );
    }
    Ok(())
}

pub fn accordion(spec: &RunSpec, out: &Path) -> CmdResult {
    let traj = spec.trajectory().map_err(usage)?;
    let base = spec.lattice().map_err(usage)?;
    let cam = spec.camera().map_err(usage)?;
    let seq = render_sequence(&traj, &base, &cam).map_err(usage)?;

    fs::create_dir_all(out)
        .with_context(|| format!("creating {}", out.display()))
        .map_err(usage)?;
    for (img, row) in seq.frames.iter().zip(&seq.manifest) {
        write_pgm(&out.join(&row.frame), img).map_err(analysis)?;
    }
    write_manifest(&out.join("manifest.csv"), &seq.manifest).map_err(analysis)?;
    if seq.frames.len() >= 2 {
        let composite = spacetime_composite(&seq.frames).map_err(analysis)?;
        write_pgm(&out.join("composite.pgm"), &composite).map_err(analysis)?;
    }
    write_key_values(&out.join("run.cfg"), &spec.to_pairs()).map_err(analysis)?;

    let first = &seq.manifest[0];
    let last = seq.manifest.last().unwrap();
    let (lo, hi) = seq
        .manifest
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
            (lo.min(r.analytic_spacing_um), hi.max(r.analytic_spacing_um))
        });
    println!(
        "{}: {} frames over {:.3} s, spacing {lo:.4}..{hi:.4} um (first {:.4}, last {:.4})",
        spec.preset.name(),
        seq.frames.len(),
        last.time_s - first.time_s,
        first.analytic_spacing_um,
        last.analytic_spacing_um
    );
    println!("wrote {}", out.display());
    Ok(())
}

pub struct AnalyzeOptions {
    pub pixel_scale: Option<f64>,
    pub wavelength: Option<f64>,
    pub focal: Option<f64>,
    pub window_rows: Option<usize>,
    pub calibrate: bool,
    pub out: Option<PathBuf>,
}

struct Input {
    frames: Vec<(String, PathBuf)>,
    manifest: Option<Vec<ManifestRow>>,
    run: Vec<(String, String)>,
    out: PathBuf,
}

fn gather(input: &Path) -> std::result::Result<Input, Failure> {
    if input.is_file() {
        let name = input
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let out = input.parent().map(Path::to_path_buf).unwrap_or_default();
        return Ok(Input {
            frames: vec![(name, input.to_path_buf())],
            manifest: None,
            run: Vec::new(),
            out,
        });
    }
    if !input.is_dir() {
        return Err(usage(anyhow::anyhow!(
            "{} is neither a file nor a directory",
            input.display()
        )));
    }
    let run_cfg = input.join("run.cfg");
    let run = if run_cfg.is_file() {
        read_key_values(&run_cfg).map_err(usage)?
    } else {
        Vec::new()
    };
    let manifest_path = input.join("manifest.csv");
    let (frames, manifest) = if manifest_path.is_file() {
        let manifest = read_manifest(&manifest_path).map_err(analysis)?;
        let frames = manifest
            .iter()
            .map(|r| (r.frame.clone(), input.join(&r.frame)))
            .collect();
        (frames, Some(manifest))
    } else {
        let mut frames: Vec<(String, PathBuf)> = fs::read_dir(input)
            .with_context(|| format!("reading {}", input.display()))
            .map_err(analysis)?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|x| x == "pgm"))
            .filter(|p| p.file_name().is_some_and(|n| n != "composite.pgm"))
            .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), p))
            .collect();
        frames.sort();
        (frames, None)
    };
    if frames.is_empty() {
        return Err(analysis(anyhow::anyhow!(
            "no frames found in {}",
            input.display()
        )));
    }
    Ok(Input {
        frames,
        manifest,
        run,
        out: input.to_path_buf(),
    })
}

fn run_value(run: &[(String, String)], key: &str) -> std::result::Result<Option<f64>, Failure> {
    match run.iter().rev().find(|(k, _)| k == key) {
        None => Ok(None),
        Some((_, v)) => v
            .parse()
            .map(Some)
            .map_err(|_| usage(anyhow::anyhow!("run.cfg: cannot parse `{v}` for `{key}`"))),
    }
}

pub fn analyze(input: &Path, opts: &AnalyzeOptions) -> CmdResult {
    let inp = gather(input)?;
    let scale = match opts.pixel_scale {
        Some(s) => Some(s),
        None => run_value(&inp.run, "pixel_scale")?,
    };
    if let Some(s) = scale {
        if !(s.is_finite() && s > 0.0) {
            return Err(usage(anyhow::anyhow!("pixel scale must be > 0, got {s}")));
        }
    }
    if opts.window_rows == Some(0) {
        return Err(usage(anyhow::anyhow!("window rows must be at least 1")));
    }

    let mut failures = Vec::new();
    let mut indices = Vec::new();
    let mut images: Vec<GrayImage> = Vec::new();
    for (k, (name, path)) in inp.frames.iter().enumerate() {
        match read_pgm(path) {
            Ok(img) => {
                indices.push(k);
                images.push(img);
            }
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    let results = measure_frames(&images, opts.window_rows);
    let mut measured: Vec<(usize, FringeMeasurement)> = Vec::new();
    for (k, r) in indices.iter().zip(results) {
        match r {
            Ok(m) => measured.push((*k, m)),
            Err(e) => failures.push(format!("{}: {e}", inp.frames[*k].0)),
        }
    }

    let rows: Vec<MeasurementRow> = measured
        .iter()
        .map(|(k, m)| {
            let meta = inp.manifest.as_ref().map(|man| &man[*k]);
            MeasurementRow {
                frame: inp.frames[*k].0.clone(),
                time_s: meta.map(|r| r.time_s),
                separation_um: meta.map(|r| r.separation_um),
                period_px: m.period_px,
                period_um: scale.map(|s| m.period_um(s)),
                center_um: scale.map(|s| m.center_um(s)),
                contrast: m.contrast,
            }
        })
        .collect();
    let out = opts.out.clone().unwrap_or(inp.out);
    fs::create_dir_all(&out)
        .with_context(|| format!("creating {}", out.display()))
        .map_err(usage)?;
    write_measurements(&out.join("measurements.csv"), &rows).map_err(analysis)?;

    println!("{} of {} frames measured", measured.len(), inp.frames.len());
    if !measured.is_empty() {
        let (lo, hi) = measured
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), (_, m)| {
                (lo.min(m.period_px), hi.max(m.period_px))
            });
        match scale {
            Some(s) => println!("period range {:.4}..{:.4} um", lo * s, hi * s),
            None => println!(
                "period range {lo:.3}..{hi:.3} px (no pixel scale; centers left in pixels)"
            ),
        }
    }

    if let (Some(manifest), true) = (&inp.manifest, failures.is_empty()) {
        let observations: Vec<CenterObservation> = measured
            .iter()
            .map(|(k, m)| {
                let period_px = scale.map_or(m.period_px, |s| manifest[*k].analytic_spacing_um / s);
                CenterObservation {
                    center_px: reduce_to_period(m.center_px, period_px),
                    period_px,
                }
            })
            .collect();
        if observations.len() >= 2 {
            let track = track_center_fringe(&observations).map_err(analysis)?;
            match scale {
                Some(s) => println!(
                    "center fringe max drift {:.4} um ({:.3} px)",
                    track.max_drift_px * s,
                    track.max_drift_px
                ),
                None => println!("center fringe max drift {:.3} px", track.max_drift_px),
            }
        }
    }

    if opts.calibrate {
        calibrate(&inp.manifest, &inp.run, &measured, opts, &out)?;
    }

    if failures.is_empty() {
        Ok(())
    } else {
        for f in &failures {
            eprintln!("{f}");
        }
        Err(analysis(anyhow::anyhow!(
            "{} of {} frames failed",
            failures.len(),
            inp.frames.len()
        )))
    }
}

fn calibrate(
    manifest: &Option<Vec<ManifestRow>>,
    run: &[(String, String)],
    measured: &[(usize, FringeMeasurement)],
    opts: &AnalyzeOptions,
    out: &Path,
) -> CmdResult {
    let manifest = manifest.as_ref().ok_or_else(|| {
        usage(anyhow::anyhow!(
            "--calibrate needs a manifest with beam separations"
        ))
    })?;
    let wavelength = match opts.wavelength {
        Some(v) => v,
        None => run_value(run, "wavelength")?.ok_or_else(|| {
            usage(anyhow::anyhow!(
                "--calibrate needs --wavelength or a run.cfg"
            ))
        })?,
    };
    let focal = match opts.focal {
        Some(v) => v,
        None => run_value(run, "focal")?
            .ok_or_else(|| usage(anyhow::anyhow!("--calibrate needs --focal or a run.cfg")))?,
    };
    let points: Vec<CalibrationPoint> = measured
        .iter()
        .map(|(k, m)| CalibrationPoint {
            separation: manifest[*k].separation_um,
            period_px: m.period_px,
            uncertainty_px: Some(m.period_uncertainty_px),
        })
        .collect();
    let fit = calibrate_pixel_scale(&points, wavelength, focal).map_err(analysis)?;
    let rows: Vec<CalibrationRow> = points
        .iter()
        .zip(&fit.fitted_periods)
        .zip(&fit.residuals)
        .map(|((p, f), r)| CalibrationRow {
            separation_um: p.separation,
            period_px: p.period_px,
            fitted_period_px: *f,
            relative_residual: *r,
            pixel_scale_um_per_px: fit.pixel_scale,
            pixel_scale_uncertainty: fit.pixel_scale_uncertainty,
        })
        .collect();
    write_calibration_report(&out.join("calibration.csv"), &rows).map_err(analysis)?;
    println!(
        "pixel scale {:.5} +/- {:.1e} um/px from {} frames",
        fit.pixel_scale,
        fit.pixel_scale_uncertainty,
        points.len()
    );
    Ok(())
}
