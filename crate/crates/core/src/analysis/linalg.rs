//! Small dense solves for the fitting routines.

/// Solves `a x = b` for a square row-major `a` by Gaussian elimination with
/// partial pivoting. Returns `None` for a singular system.
pub(crate) fn solve(mut a: Vec<f64>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    debug_assert_eq!(a.len(), n * n);
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let pivot =
            (col..n).max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))?;
        if a[pivot * n + col].abs() <= 1e-14 * scale {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            b.swap(pivot, col);
        }
        for row in col + 1..n {
            let factor = a[row * n + col] / a[col * n + col];
            if factor != 0.0 {
                for k in col..n {
                    a[row * n + k] -= factor * a[col * n + k];
                }
                b[row] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row * n + k] * x[k];
        }
        x[row] = s / a[row * n + row];
    }
    Some(x)
}

/// Weighted linear least squares: minimizes `Σ w_i (y_i - Σ_k c_k basis_k(i))²`
/// where `basis(i)` fills one row of the design matrix.
pub(crate) fn weighted_least_squares(
    y: &[f64],
    weights: &[f64],
    nbasis: usize,
    mut basis: impl FnMut(usize, &mut [f64]),
) -> Option<Vec<f64>> {
    let mut ata = vec![0.0; nbasis * nbasis];
    let mut atb = vec![0.0; nbasis];
    let mut row = vec![0.0; nbasis];
    for (i, (&yi, &wi)) in y.iter().zip(weights).enumerate() {
        if wi == 0.0 {
            continue;
        }
        basis(i, &mut row);
        for r in 0..nbasis {
            let wr = wi * row[r];
            atb[r] += wr * yi;
            for c in r..nbasis {
                ata[r * nbasis + c] += wr * row[c];
            }
        }
    }
    for r in 0..nbasis {
        for c in 0..r {
            ata[r * nbasis + c] = ata[c * nbasis + r];
        }
    }
    solve(ata, atb)
}

/// Symmetric Hann weights of length `n`, zero at both ends.
pub(crate) fn hann(n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![1.0; n];
    }
    let m = (n - 1) as f64;
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / m).cos())
        .collect()
}

pub(crate) fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let x = solve(vec![2.0, 1.0, 1.0, 3.0], vec![3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
        assert!(solve(vec![1.0, 2.0, 2.0, 4.0], vec![1.0, 1.0]).is_none());
    }

    #[test]
    fn recovers_polynomial() {
        let y: Vec<f64> = (0..20)
            .map(|i| 1.0 - 2.0 * i as f64 + 0.5 * (i * i) as f64)
            .collect();
        let w = vec![1.0; 20];
        let c = weighted_least_squares(&y, &w, 3, |i, row| {
            let x = i as f64;
            row.copy_from_slice(&[1.0, x, x * x]);
        })
        .unwrap();
        assert!(
            (c[0] - 1.0).abs() < 1e-9 && (c[1] + 2.0).abs() < 1e-9 && (c[2] - 0.5).abs() < 1e-9
        );
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
