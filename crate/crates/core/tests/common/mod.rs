#![allow(dead_code)]

use accordion_core::field::interference_intensity;
use accordion_core::instrument::render_frame;
use accordion_core::{CameraModel, GrayImage, LatticeConfig};

pub const LAMBDA: f64 = 0.532;

pub fn render(cfg: &LatticeConfig, cam: &CameraModel, index: u64) -> GrayImage {
    let grid = cam.grid().unwrap();
    let intensity = interference_intensity(cfg, &grid).unwrap();
    render_frame(&intensity, cam, index).unwrap()
}

pub fn mean_rows(image: &GrayImage) -> Vec<f64> {
    let h = image.height();
    (0..image.width())
        .map(|i| (0..h).map(|j| image.get(i, j) as f64).sum::<f64>() / h as f64)
        .collect()
}

fn refine(r: &[f64], k: usize) -> f64 {
    let (a, b, c) = (r[k - 1], r[k], r[k + 1]);
    let den = a - 2.0 * b + c;
    if den < 0.0 {
        k as f64 + 0.5 * (a - c) / den
    } else {
        k as f64
    }
}

/// Period from the brute-force autocorrelation: the first peak gives a
/// coarse period, which is sharpened by locating the peaks at doubling
/// multiples of it up to n/2.
pub fn autocorrelation_period(profile: &[f64]) -> Option<f64> {
    let n = profile.len();
    let mean = profile.iter().sum::<f64>() / n as f64;
    let x: Vec<f64> = profile.iter().map(|v| v - mean).collect();
    let max_lag = n - n / 4;
    let r: Vec<f64> = (0..=max_lag)
        .map(|lag| (0..n - lag).map(|i| x[i] * x[i + lag]).sum::<f64>() / (n - lag) as f64)
        .collect();
    let first_neg = (1..max_lag).find(|&k| r[k] < 0.0)?;
    let is_peak = |k: usize| r[k] >= r[k - 1] && r[k] >= r[k + 1];
    let k1 = (first_neg..max_lag).find(|&k| is_peak(k))?;
    let mut period = refine(&r, k1);
    let mut m = 1.0;
    while 2.0 * m * period <= 0.5 * n as f64 {
        m *= 2.0;
        let target = m * period;
        let lo = ((target - 0.5 * period).floor() as usize).max(1);
        let hi = ((target + 0.5 * period).ceil() as usize).min(max_lag - 1);
        let km = (lo..=hi).max_by(|&a, &b| r[a].total_cmp(&r[b]))?;
        period = refine(&r, km) / m;
    }
    Some(period)
}

/// Half-plane transmitted power of a unit-peak Gaussian spot centered at the
/// origin: midpoint sums in x, the exact Gaussian integral in y.
pub fn half_plane_power(waist: f64, knife: f64) -> f64 {
    let n = 20_000;
    let lo = -6.0 * waist;
    let h = 12.0 * waist / n as f64;
    let y_int = (std::f64::consts::PI / 2.0).sqrt() * waist;
    let mut total = 0.0;
    for i in 0..n {
        let a = lo + i as f64 * h;
        if a >= knife {
            break;
        }
        let b = (a + h).min(knife);
        let mid = 0.5 * (a + b);
        total += (-2.0 * mid * mid / (waist * waist)).exp() * (b - a);
    }
    total * y_int
}
