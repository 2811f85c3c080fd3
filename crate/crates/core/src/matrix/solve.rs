//! Coefficients of a matrix in the span of a list of matrices.

use super::{Cq, Entry, Matrix, Scalar, Tolerance, C64};
use crate::error::{Error, Result};

/// Finds `c` with `target = Σ c_k basis_k`, or `None` when `target` is not in the span.
///
/// Runs exact Gaussian elimination when every input is exact, partial-pivot
/// elimination with `tol.abs_tol()` as the zero threshold otherwise. Coefficients
/// of dependent basis elements are set to zero.
pub fn span_coefficients(
    basis: &[Matrix],
    target: &Matrix,
    tol: &Tolerance,
) -> Result<Option<Vec<Scalar>>> {
    for b in basis {
        if (b.rows(), b.cols()) != (target.rows(), target.cols()) {
            return Err(Error::dim(format!(
                "basis element is {}x{}, target is {}x{}",
                b.rows(),
                b.cols(),
                target.rows(),
                target.cols()
            )));
        }
    }
    let k = basis.len();
    let n = target.len();
    if basis.iter().all(Matrix::is_exact) && target.is_exact() {
        let mut aug: Vec<Vec<Cq>> = (0..n).map(|_| Vec::with_capacity(k + 1)).collect();
        fill(&mut aug, basis, target, |m| match m.entries() {
            super::Entries::Exact(d) => d.clone(),
            super::Entries::Float(_) => unreachable!(),
        });
        Ok(eliminate(aug, k, |z: &Cq| !num_traits::Zero::is_zero(z))
            .map(|c| c.into_iter().map(Scalar::Exact).collect()))
    } else {
        let eps = if tol.is_exact() { 1e-12 } else { tol.abs_tol() };
        let mut aug: Vec<Vec<C64>> = (0..n).map(|_| Vec::with_capacity(k + 1)).collect();
        fill(&mut aug, basis, target, Matrix::float_data);
        Ok(eliminate(aug, k, |z: &C64| z.norm() > eps)
            .map(|c| c.into_iter().map(Scalar::Float).collect()))
    }
}

fn fill<E>(
    aug: &mut [Vec<E>],
    basis: &[Matrix],
    target: &Matrix,
    data: impl Fn(&Matrix) -> Vec<E>,
) {
    for m in basis.iter().chain(std::iter::once(target)) {
        for (row, v) in aug.iter_mut().zip(data(m)) {
            row.push(v);
        }
    }
}

fn eliminate<E: Entry>(
    mut aug: Vec<Vec<E>>,
    k: usize,
    nonzero: impl Fn(&E) -> bool,
) -> Option<Vec<E>> {
    let n = aug.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..k {
        if row == n {
            break;
        }
        let candidate = if E::EXACT {
            (row..n).find(|&r| nonzero(&aug[r][col]))
        } else {
            (row..n)
                .filter(|&r| nonzero(&aug[r][col]))
                .max_by(|&a, &b| aug[a][col].modulus().total_cmp(&aug[b][col].modulus()))
        };
        let Some(p) = candidate else { continue };
        aug.swap(row, p);
        let inv = E::one() / aug[row][col].clone();
        for v in aug[row].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot_row = aug[row].clone();
        for (r, other) in aug.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (v, p) in other.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *v = v.clone() - f.clone() * p.clone();
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if aug[row..].iter().any(|r| nonzero(&r[k])) {
        return None;
    }
    let mut coeffs: Vec<E> = (0..k).map(|_| E::zero()).collect();
    for (r, &col) in pivots.iter().enumerate() {
        coeffs[col] = aug[r][k].clone();
    }
    Some(coeffs)
}
