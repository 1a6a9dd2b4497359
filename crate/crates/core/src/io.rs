//! On-disk formats: binary PGM frames and the CSV manifests and reports.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instrument::{BitDepth, GrayImage, ManifestRow};

pub const MANIFEST_HEADER: &str =
    "frame,time_s,mirror_um,separation_um,analytic_spacing_um,path_difference_um";
pub const MEASUREMENT_HEADER: &str =
    "frame,time_s,separation_um,period_px,period_um,center_um,contrast";

/// Encodes `image` as binary PGM (P5). 8-bit images use maxval 255;
/// 16-bit images use maxval 65535 with big-endian samples.
pub fn encode_pgm(image: &GrayImage) -> Vec<u8> {
    let maxval = image.depth().max_value();
    let mut out = format!("P5\n{} {}\n{}\n", image.width(), image.height(), maxval).into_bytes();
    match image.depth() {
        BitDepth::Eight => out.extend(image.pixels().iter().map(|p| *p as u8)),
        BitDepth::Sixteen => {
            for p in image.pixels() {
                out.extend_from_slice(&p.to_be_bytes());
            }
        }
    }
    out
}

pub fn write_pgm(path: &Path, image: &GrayImage) -> Result<()> {
    fs::write(path, encode_pgm(image))?;
    Ok(())
}

pub fn decode_pgm(bytes: &[u8], path: &Path) -> Result<GrayImage> {
    let bad = |message: &str| Error::Format {
        path: path.to_path_buf(),
        message: message.to_string(),
    };
    let mut pos = 0;
    let mut tokens = Vec::with_capacity(4);
    while tokens.len() < 4 {
        // skip whitespace and comments
        while pos < bytes.len() {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else if bytes[pos].is_ascii_whitespace() {
                pos += 1;
            } else {
                break;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() && bytes[pos] != b'#' {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated header"));
        }
        tokens.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("non-ASCII header"))?);
    }
    if tokens[0] != "P5" {
        return Err(bad("not a binary graymap (P5)"));
    }
    let parse = |s: &str| s.parse::<usize>().map_err(|_| bad("bad header number"));
    let width = parse(tokens[1])?;
    let height = parse(tokens[2])?;
    let maxval = parse(tokens[3])?;
    // exactly one whitespace byte separates the header from the raster
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(bad("missing raster"));
    }
    pos += 1;
    let raster = &bytes[pos..];
    let n = width * height;
    let (depth, pixels) = match maxval {
        1..=255 => {
            if raster.len() < n {
                return Err(bad("raster shorter than header"));
            }
            (
                BitDepth::Eight,
                raster[..n].iter().map(|b| *b as u16).collect::<Vec<_>>(),
            )
        }
        256..=65535 => {
            if raster.len() < 2 * n {
                return Err(bad("raster shorter than header"));
            }
            let px = raster[..2 * n]
                .chunks_exact(2)
                .map(|c| u16::from_be_bytes([c[0], c[1]]))
                .collect();
            (BitDepth::Sixteen, px)
        }
        _ => return Err(bad("maxval out of range")),
    };
    GrayImage::new(width, height, depth, pixels).map_err(|e| bad(&e.to_string()))
}

pub fn read_pgm(path: &Path) -> Result<GrayImage> {
    decode_pgm(&fs::read(path)?, path)
}

fn write_records<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn read_records<T: DeserializeOwned>(path: &Path, header: &str) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)?;
    let found = r.headers()?.iter().collect::<Vec<_>>().join(",");
    if found != header {
        return Err(Error::Format {
            path: path.to_path_buf(),
            message: format!("expected header `{header}`, found `{found}`"),
        });
    }
    Ok(r.deserialize().collect::<csv::Result<Vec<T>>>()?)
}

pub fn write_manifest(path: &Path, rows: &[ManifestRow]) -> Result<()> {
    write_records(path, rows)
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestRow>> {
    read_records(path, MANIFEST_HEADER)
}

/// Per-frame analysis output. `period_um` and `center_um` are empty when no
/// pixel scale is known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRow {
    pub frame: String,
    pub time_s: Option<f64>,
    pub separation_um: Option<f64>,
    pub period_px: f64,
    pub period_um: Option<f64>,
    pub center_um: Option<f64>,
    pub contrast: f64,
}

pub fn write_measurements(path: &Path, rows: &[MeasurementRow]) -> Result<()> {
    write_records(path, rows)
}

pub fn read_measurements(path: &Path) -> Result<Vec<MeasurementRow>> {
    read_records(path, MEASUREMENT_HEADER)
}

/// One point of a pixel-scale fit report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRow {
    pub separation_um: f64,
    pub period_px: f64,
    pub fitted_period_px: f64,
    pub relative_residual: f64,
    pub pixel_scale_um_per_px: f64,
    pub pixel_scale_uncertainty: f64,
}

pub fn write_calibration_report(path: &Path, rows: &[CalibrationRow]) -> Result<()> {
    write_records(path, rows)
}

/// Writes `key=value` lines in the given order.
pub fn write_key_values(path: &Path, pairs: &[(String, String)]) -> Result<()> {
    let mut f = fs::File::create(path)?;
    for (k, v) in pairs {
        writeln!(f, "{k}={v}")?;
    }
    Ok(())
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_key_values(text: &str, path: &Path) -> Result<Vec<(String, String)>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(n, l)| {
            let (k, v) = l.split_once('=').ok_or_else(|| Error::Format {
                path: path.to_path_buf(),
                message: format!("line {}: expected key=value", n + 1),
            })?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

pub fn read_key_values(path: &Path) -> Result<Vec<(String, String)>> {
    parse_key_values(&fs::read_to_string(path)?, path)
}
