//! Singular values by one-sided (Hestenes) Jacobi rotations.

use num_traits::Zero;

use super::{Matrix, C64};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const ORTHO_EPS: f64 = 1e-15;

/// Singular values in descending order, `min(rows, cols)` of them. Exact
/// matrices are converted to float first.
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>> {
    if m.is_empty() {
        return Err(Error::dim("singular values of an empty matrix"));
    }
    let full = m.rows().min(m.cols());
    let data = m.float_data();
    let (r, c) = (m.rows(), m.cols());

    // Zero rows and columns contribute only zero singular values.
    let live_rows: Vec<usize> = (0..r)
        .filter(|&i| (0..c).any(|j| !data[i * c + j].is_zero()))
        .collect();
    let live_cols: Vec<usize> = (0..c)
        .filter(|&j| (0..r).any(|i| !data[i * c + j].is_zero()))
        .collect();

    // Orthogonalize along the shorter dimension.
    let mut columns: Vec<Vec<C64>> = if live_cols.len() <= live_rows.len() {
        live_cols
            .iter()
            .map(|&j| live_rows.iter().map(|&i| data[i * c + j]).collect())
            .collect()
    } else {
        live_rows
            .iter()
            .map(|&i| live_cols.iter().map(|&j| data[i * c + j].conj()).collect())
            .collect()
    };

    jacobi_orthogonalize(&mut columns);

    let mut sv: Vec<f64> = columns
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.resize(full, 0.0);
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

fn jacobi_orthogonalize(columns: &mut [Vec<C64>]) {
    let n = columns.len();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let (left, right) = columns.split_at_mut(j);
                let (a, b) = (&mut left[i], &mut right[0]);
                let alpha: f64 = a.iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = b.iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= ORTHO_EPS * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                let phase = (gamma / g).conj();
                for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                    let xi = *x;
                    let yj = *y * phase;
                    *x = xi * cs - yj * sn;
                    *y = xi * sn + yj * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }
}

/// Largest singular value.
pub fn op_norm(m: &Matrix) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

/// Sum of singular values (unnormalized trace norm).
pub fn schatten1_norm(m: &Matrix) -> Result<f64> {
    Ok(singular_values(m)?.iter().sum())
}

/// Number of singular values strictly above `tol`.
pub fn numerical_rank(m: &Matrix, tol: f64) -> Result<usize> {
    Ok(singular_values(m)?.iter().filter(|&&s| s > tol).count())
}
