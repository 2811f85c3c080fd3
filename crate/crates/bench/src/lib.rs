//! Fixtures shared by the criterion benches.

use opalg_core::matrix::{Backend, Scalar, C64};
use opalg_core::Matrix;

/// Deterministic dense complex matrix with entries on the unit circle.
pub fn circle_matrix(n: usize) -> Matrix {
    Matrix::from_fn(n, n, Backend::Float, |i, j| {
        let theta = ((i * 31 + j * 17) % 97) as f64 * 0.37;
        Scalar::Float(C64::from_polar(1.0, theta))
    })
}

/// `n` equally spaced points on the unit circle.
pub fn roots_of_unity(n: usize) -> Vec<C64> {
    (0..n)
        .map(|j| C64::from_polar(1.0, std::f64::consts::TAU * j as f64 / n as f64))
        .collect()
}
