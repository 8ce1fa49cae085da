//! Exact Carathéodory reduction by repeated affine-dependence elimination.

use crate::error::{Error, Result};
use crate::geometry::{ConvexCombination, PointSource};

/// Pivot threshold relative to the largest lifted column norm.
pub const PIVOT_TOL: f64 = 1e-10;

/// Drift beyond which weights are rescaled to sum to 1 after a round.
const RENORMALIZE_TOL: f64 = 1e-15;

/// Finds `lambda != 0` with `sum lambda_i = 0` and `sum lambda_i p_i = 0` over
/// the points at `indices`.
///
/// Works on the `(d+1) x m` matrix of points lifted with a trailing 1 using
/// Gauss-Jordan elimination with partial pivoting. Returns `None` when every
/// column gets a pivot, i.e. the points are affinely independent.
pub fn find_affine_dependence<P: PointSource + ?Sized>(
    points: &P,
    indices: &[usize],
) -> Result<Option<Vec<f64>>> {
    let m = indices.len();
    if m == 0 {
        return Err(Error::InvalidInput("no indices given".into()));
    }
    if let Some(&i) = indices.iter().find(|&&i| i >= points.len()) {
        return Err(Error::InvalidInput(format!(
            "index {i} out of range for {} points",
            points.len()
        )));
    }
    let mut seen = indices.to_vec();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput("indices are not distinct".into()));
    }

    let d = points.dimension();
    let rows = d + 1;
    let mut a = vec![0.0; rows * m];
    for (col, &idx) in indices.iter().enumerate() {
        for j in 0..d {
            a[j * m + col] = points.coordinate(idx, j);
        }
        a[d * m + col] = 1.0;
    }
    let scale = (0..m)
        .map(|col| {
            (0..rows)
                .map(|r| a[r * m + col].powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    let tol = PIVOT_TOL * scale;

    // (row, column) of each pivot found so far
    let mut pivots: Vec<(usize, usize)> = Vec::with_capacity(rows.min(m));
    let mut free = None;
    for col in 0..m {
        let r = pivots.len();
        if r == rows {
            free = Some(col);
            break;
        }
        let (best, mag) = (r..rows)
            .map(|i| (i, a[i * m + col].abs()))
            .fold((r, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if mag <= tol {
            free = Some(col);
            break;
        }
        if best != r {
            for k in 0..m {
                a.swap(best * m + k, r * m + k);
            }
        }
        let inv = 1.0 / a[r * m + col];
        for k in col..m {
            a[r * m + k] *= inv;
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a[i * m + col];
            if factor != 0.0 {
                for k in col..m {
                    a[i * m + k] -= factor * a[r * m + k];
                }
            }
        }
        pivots.push((r, col));
    }

    Ok(free.map(|f| {
        let mut lambda = vec![0.0; m];
        lambda[f] = 1.0;
        for &(row, col) in &pivots {
            lambda[col] = -a[row * m + f];
        }
        lambda
    }))
}

/// Rewrites `c` as a combination of at most `d + 1` of its own support points
/// with the same value.
///
/// Each round takes the first `d + 2` support points, finds an affine
/// dependence among them and moves along it until at least one weight is zero.
pub fn caratheodory_reduce<P: PointSource + ?Sized>(
    points: &P,
    c: &ConvexCombination,
) -> Result<ConvexCombination> {
    c.check_against(points)?;
    let limit = points.dimension() + 1;
    if c.len() <= limit {
        return Ok(c.clone());
    }

    let mut support = c.support().to_vec();
    while support.len() > limit {
        let window: Vec<usize> = support[..=limit].iter().map(|&(i, _)| i).collect();
        let mut lambda = match find_affine_dependence(points, &window)? {
            Some(lambda) => lambda,
            None => return Err(failure(&support)),
        };

        let max_abs = lambda.iter().fold(0.0f64, |m, l| m.max(l.abs()));
        let max_pos = lambda.iter().fold(0.0f64, |m, &l| m.max(l));
        if max_pos < max_abs {
            lambda.iter_mut().for_each(|l| *l = -*l);
        }
        let noise = 1e-14 * max_abs;
        let step = window
            .iter()
            .enumerate()
            .filter(|&(k, _)| lambda[k] > noise)
            .map(|(k, _)| support[k].1 / lambda[k])
            .fold(f64::INFINITY, f64::min);
        if !step.is_finite() {
            return Err(failure(&support));
        }

        for (k, entry) in support[..=limit].iter_mut().enumerate() {
            if lambda[k] > noise && entry.1 / lambda[k] == step {
                entry.1 = 0.0;
            } else {
                entry.1 -= step * lambda[k];
                if entry.1 < 0.0 {
                    entry.1 = 0.0;
                }
            }
        }
        let before = support.len();
        support.retain(|&(_, w)| w > 0.0);
        if support.len() >= before || support.is_empty() {
            return Err(failure(&support));
        }
        let total: f64 = support.iter().map(|&(_, w)| w).sum();
        if (total - 1.0).abs() > RENORMALIZE_TOL {
            support.iter_mut().for_each(|e| e.1 /= total);
        }
    }
    Ok(ConvexCombination::from_sorted_unchecked(
        support,
        c.num_points(),
    ))
}

fn failure(support: &[(usize, f64)]) -> Error {
    Error::ReductionFailed {
        support: support.iter().map(|&(i, _)| i).collect(),
    }
}
