use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::matrix::{Matrix, Scalar, Tolerance};

use super::tensor::{pi_map, TensorElem};

/// `Δ_n = e_1⊗e_1 + Σ_{j=2..n} (e_j − e_{j−1})⊗(e_j − e_{j−1})`.
pub fn build_delta(chain: &Chain, n: usize) -> Result<TensorElem> {
    if n == 0 || n > chain.len() {
        return Err(Error::Index {
            index: n,
            max: chain.len(),
        });
    }
    let family = chain.orthogonal_family();
    TensorElem::from_terms(
        chain.truncation_dim,
        family[..n].iter().map(|f| (f.clone(), f.clone())).collect(),
    )
}

fn comparison_tol(a: &Matrix, b: &Matrix) -> Tolerance {
    if a.is_exact() && b.is_exact() {
        Tolerance::exact()
    } else {
        Tolerance::default()
    }
}

/// `M = 2Δ − u·Δ + (1−u)⊗(1−u)` where `u = π(Δ)` and `1` is the identity of
/// the truncation, which stands in for the adjoined unit. `π(M) = 1`.
pub fn unitize_diagonal(delta: &TensorElem, u: &Matrix, one: &Matrix) -> Result<TensorElem> {
    let pi = pi_map(delta);
    if !one.is_square() || one.rows() != delta.dim() {
        return Err(Error::dim("unit must match the tensor dimension"));
    }
    let id = Matrix::identity(one.rows(), one.backend());
    if !one.agrees(&id, &comparison_tol(one, &id))? {
        return Err(Error::pre("`one` must be the identity of the truncation"));
    }
    if !u.agrees(&pi, &comparison_tol(u, &pi))? {
        return Err(Error::pre("u must equal π(Δ)"));
    }
    let gap = one - u;
    let unitized = delta
        .scale(&Scalar::int(2))
        .minus(&delta.left_mul(u)?)?
        .plus(&TensorElem::simple(gap.clone(), gap)?)?;
    let pi_m = pi_map(&unitized);
    if !pi_m.agrees(one, &comparison_tol(&pi_m, one))? {
        return Err(Error::pre("π(M) differs from the identity"));
    }
    Ok(unitized)
}
