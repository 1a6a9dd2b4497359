//! Beam waist from a scanning knife-edge profile.
//!
//! An opaque edge blocks everything beyond `x`, so the transmitted power of a
//! Gaussian beam of 1/e² radius `w` is
//! `P(x) = (P_tot / 2) (1 + erf(sqrt(2) (x - x0) / w))`.

use std::f64::consts::{PI, SQRT_2};

use libm::erf;

use super::linalg::solve;
use crate::error::{Error, Result};
use crate::field::IntensityFrame;
use crate::instrument::GrayImage;

pub const MIN_KNIFE_POINTS: usize = 8;

/// Residual rms, as a fraction of the fitted total power, above which a fit
/// is rejected.
pub const MAX_RELATIVE_RMS: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnifeEdgeFit {
    /// 1/e² intensity radius, in the units of the knife positions.
    pub waist: f64,
    pub waist_uncertainty: f64,
    pub center: f64,
    pub total_power: f64,
    pub rms_residual: f64,
}

fn model(x: f64, p: &[f64; 3]) -> f64 {
    0.5 * p[0] * (1.0 + erf(SQRT_2 * (x - p[1]) / p[2]))
}

fn jacobian_row(x: f64, p: &[f64; 3]) -> [f64; 3] {
    let z = SQRT_2 * (x - p[1]) / p[2];
    let g = p[0] / PI.sqrt() * (-z * z).exp();
    [0.5 * (1.0 + erf(z)), -g * SQRT_2 / p[2], -g * z / p[2]]
}

fn sum_sq(profile: &[(f64, f64)], p: &[f64; 3]) -> f64 {
    profile
        .iter()
        .map(|(x, y)| (y - model(*x, p)).powi(2))
        .sum()
}

/// Starting point read off the profile: plateau height, the half-power
/// crossing, and the 16 %–84 % distance (which equals `w` for this model).
fn initial_guess(profile: &[(f64, f64)]) -> [f64; 3] {
    let lo = profile.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let hi = profile
        .iter()
        .map(|p| p.1)
        .fold(f64::NEG_INFINITY, f64::max);
    let rising = profile.last().unwrap().1 >= profile[0].1;
    let crossing = |level: f64| -> f64 {
        for w in profile.windows(2) {
            let (a, b) = (w[0].1 - level, w[1].1 - level);
            if a == 0.0 {
                return w[0].0;
            }
            if a * b < 0.0 {
                return w[0].0 + (w[1].0 - w[0].0) * a / (a - b);
            }
        }
        0.5 * (profile[0].0 + profile.last().unwrap().0)
    };
    let span = hi - lo;
    let x0 = crossing(lo + 0.5 * span);
    let mut w = crossing(lo + 0.841 * span) - crossing(lo + 0.159 * span);
    if w == 0.0 {
        w = 0.25 * (profile.last().unwrap().0 - profile[0].0);
    }
    if !rising {
        w = -w.abs();
    }
    [hi.max(1e-300), x0, w]
}

/// Levenberg–Marquardt fit of the erf profile over `(P_tot, x0, w)`.
/// Profiles falling with `x` (edge entering from the other side) yield a
/// negative internal `w`; the reported waist is its magnitude.
pub fn knife_edge_waist(profile: &[(f64, f64)]) -> Result<KnifeEdgeFit> {
    if profile.len() < MIN_KNIFE_POINTS {
        return Err(Error::FitFailed(format!(
            "{} knife positions, need at least {MIN_KNIFE_POINTS}",
            profile.len()
        )));
    }
    if profile
        .iter()
        .any(|(x, y)| !x.is_finite() || !y.is_finite())
    {
        return Err(Error::FitFailed("non-finite knife-edge sample".into()));
    }
    let mut sorted = profile.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut p = initial_guess(&sorted);
    let mut cost = sum_sq(&sorted, &p);
    let mut lambda = 1e-3;
    for _ in 0..500 {
        let mut jtj = [0.0; 9];
        let mut jtr = [0.0; 3];
        for (x, y) in &sorted {
            let j = jacobian_row(*x, &p);
            let r = y - model(*x, &p);
            for a in 0..3 {
                jtr[a] += j[a] * r;
                for b in 0..3 {
                    jtj[3 * a + b] += j[a] * j[b];
                }
            }
        }
        let mut improved = false;
        while lambda < 1e12 {
            let mut damped = jtj;
            for a in 0..3 {
                damped[4 * a] += lambda * jtj[4 * a].max(1e-300);
            }
            let Some(step) = solve(damped.to_vec(), jtr.to_vec()) else {
                lambda *= 10.0;
                continue;
            };
            let trial = [p[0] + step[0], p[1] + step[1], p[2] + step[2]];
            let trial_cost = if trial[2] != 0.0 {
                sum_sq(&sorted, &trial)
            } else {
                f64::INFINITY
            };
            if trial_cost <= cost {
                let rel_step = (step[2] / p[2]).abs().max((step[0] / p[0]).abs());
                p = trial;
                let converged = cost - trial_cost <= 1e-15 * cost.max(1e-300) && rel_step < 1e-10;
                cost = trial_cost;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                if converged {
                    lambda = f64::INFINITY;
                }
                break;
            }
            lambda *= 10.0;
        }
        if !improved || lambda.is_infinite() {
            break;
        }
    }

    let n = sorted.len() as f64;
    let rms = (cost / n).sqrt();
    let acceptable = p[0] > 0.0 && rms <= MAX_RELATIVE_RMS * p[0];
    if !acceptable {
        return Err(Error::FitFailed(format!(
            "residual rms {rms:.4e} exceeds {:.0}% of total power {:.4e}",
            100.0 * MAX_RELATIVE_RMS,
            p[0]
        )));
    }

    let mut jtj = [0.0; 9];
    for (x, _) in &sorted {
        let j = jacobian_row(*x, &p);
        for a in 0..3 {
            for b in 0..3 {
                jtj[3 * a + b] += j[a] * j[b];
            }
        }
    }
    let s2 = cost / (n - 3.0);
    let waist_uncertainty = solve(jtj.to_vec(), vec![0.0, 0.0, 1.0])
        .map(|col| (s2 * col[2].abs()).sqrt())
        .unwrap_or(f64::INFINITY);

    Ok(KnifeEdgeFit {
        waist: p[2].abs(),
        waist_uncertainty,
        center: p[1],
        total_power: p[0],
        rms_residual: rms,
    })
}

/// Power transmitted past a knife edge at each position (µm), integrating
/// the frame over `x < position` with the trapezoid rule on every row.
pub fn knife_edge_profile(frame: &IntensityFrame, positions: &[f64]) -> Vec<(f64, f64)> {
    let grid = frame.grid();
    let (nx, ny) = grid.samples();
    let dy = grid.dy();
    let columns: Vec<f64> = (0..nx)
        .map(|i| {
            (0..ny)
                .map(|j| {
                    let wy = if j == 0 || j == ny - 1 { 0.5 } else { 1.0 };
                    wy * frame.get(i, j)
                })
                .sum::<f64>()
                * dy
        })
        .collect();
    let dx = grid.dx();
    positions
        .iter()
        .map(|&xk| {
            let mut total = 0.0;
            for i in 0..nx - 1 {
                let (x0, x1) = (grid.x(i), grid.x(i + 1));
                if xk <= x0 {
                    break;
                }
                let (c0, c1) = (columns[i], columns[i + 1]);
                if xk >= x1 {
                    total += 0.5 * dx * (c0 + c1);
                } else {
                    let t = (xk - x0) / dx;
                    let ck = c0 + t * (c1 - c0);
                    total += 0.5 * (xk - x0) * (c0 + ck);
                }
            }
            (xk, total)
        })
        .collect()
}

/// Knife-edge profile of a digital image in pixel units. Pixel `i` covers
/// `[x_i - 1/2, x_i + 1/2]` around its centered coordinate and is assumed
/// uniform inside.
pub fn knife_edge_profile_from_image(image: &GrayImage, positions_px: &[f64]) -> Vec<(f64, f64)> {
    let n = image.width();
    let columns: Vec<f64> = (0..n)
        .map(|i| (0..image.height()).map(|j| image.get(i, j) as f64).sum())
        .collect();
    let left = -0.5 * n as f64;
    positions_px
        .iter()
        .map(|&xk| {
            let covered = (xk - left).clamp(0.0, n as f64);
            let whole = covered.floor() as usize;
            let mut total: f64 = columns[..whole.min(n)].iter().sum();
            if whole < n {
                total += (covered - whole as f64) * columns[whole];
            }
            (xk, total)
        })
        .collect()
}
