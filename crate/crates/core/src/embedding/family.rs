use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::cq_from_c64;
use crate::matrix::{op_norm, Backend, Matrix, Scalar, Tolerance};
use crate::sampling::{complex_vector, substream};

/// Ambient index of `α`.
pub const ALPHA: usize = 0;
/// Ambient index of `ω`.
pub const OMEGA: usize = 1;

/// Rank-one idempotents `E_n = y_n x_n*` on the ambient space with basis order
/// `(α, ω, 1, ..., n_max)`, where `x_n = e_α + e_ω + e_n` and `y_n = -e_α + e_ω + e_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOneFamily {
    pub n_max: usize,
}

/// Ambient index of coordinate `j ≥ 1`.
pub fn coord(j: usize) -> usize {
    j + 1
}

impl RankOneFamily {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::arg("n_max must be positive"));
        }
        Ok(RankOneFamily { n_max })
    }

    pub fn dim(&self) -> usize {
        self.n_max + 2
    }

    fn check(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.n_max {
            return Err(Error::Index {
                index: n,
                max: self.n_max,
            });
        }
        Ok(())
    }

    pub fn x(&self, n: usize) -> Result<Vec<Scalar>> {
        self.check(n)?;
        let mut v = vec![Scalar::zero_exact(); self.dim()];
        v[ALPHA] = Scalar::int(1);
        v[OMEGA] = Scalar::int(1);
        v[coord(n)] = Scalar::int(1);
        Ok(v)
    }

    pub fn y(&self, n: usize) -> Result<Vec<Scalar>> {
        self.check(n)?;
        let mut v = vec![Scalar::zero_exact(); self.dim()];
        v[ALPHA] = Scalar::int(-1);
        v[OMEGA] = Scalar::int(1);
        v[coord(n)] = Scalar::int(1);
        Ok(v)
    }
}

/// `E_n` on the full ambient space.
pub fn build_e(n: usize, fam: &RankOneFamily) -> Result<Matrix> {
    Ok(Matrix::outer(&fam.y(n)?, &fam.x(n)?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EFamilyReport {
    pub n_max: usize,
    pub norms: Vec<f64>,
    pub norms_ok: bool,
    pub idempotent_exact: bool,
    pub pairs_checked: usize,
    pub products_zero_exact: bool,
    pub range_ok: bool,
    pub witness_trials: usize,
    /// `⟨(Σ a_j E_j) e_ω, e_ω⟩ = Σ a_j` held exactly on every trial.
    pub witness_exact: bool,
    /// `|Σ a_j| ≤ ‖Σ a_j E_j‖` held on every trial.
    pub witness_bound_ok: bool,
    pub pass: bool,
}

/// Checks `‖E_n‖ = 3`, `E_n² = E_n`, `E_j E_k = 0` for `j ≠ k`, that `E_n` and
/// `E_n*` live on `span(e_α, e_ω, e_n)`, and the `ω`-entry witness for
/// `‖Σ a_j E_j‖ ≥ |Σ a_j|` on `trials` seeded coefficient vectors.
pub fn certify_e_family(
    fam: &RankOneFamily,
    trials: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<EFamilyReport> {
    let es = (1..=fam.n_max)
        .map(|n| build_e(n, fam))
        .collect::<Result<Vec<_>>>()?;
    let norm_tol = tol.abs_tol().max(1e-9);
    let norms = es.iter().map(op_norm).collect::<Result<Vec<_>>>()?;
    let norms_ok = norms.iter().all(|v| (v - 3.0).abs() <= norm_tol);
    let idempotent_exact = es.iter().all(|e| &(e * e) == e);
    let mut pairs_checked = 0;
    let mut products_zero_exact = true;
    for (j, ej) in es.iter().enumerate() {
        for (k, ek) in es.iter().enumerate() {
            if j != k {
                pairs_checked += 1;
                products_zero_exact &= (ej * ek).is_zero();
            }
        }
    }
    let range_ok = es.iter().enumerate().all(|(i, e)| {
        let allowed = [ALPHA, OMEGA, coord(i + 1)];
        e.nonzeros()
            .all(|(r, c, _)| allowed.contains(&r) && allowed.contains(&c))
    });

    let mut rng = substream(seed, "e-family-witness");
    let mut witness_exact = true;
    let mut witness_bound_ok = true;
    for _ in 0..trials {
        let coeffs = complex_vector(&mut rng, fam.n_max)
            .into_iter()
            .map(|z| cq_from_c64(z).map(Scalar::Exact))
            .collect::<Result<Vec<_>>>()?;
        let mut s = Matrix::zeros(fam.dim(), fam.dim(), Backend::Exact);
        for (a, e) in coeffs.iter().zip(&es) {
            s = &s + &e.scale(a);
        }
        let sum: Scalar = coeffs.iter().cloned().sum();
        witness_exact &= s.get(OMEGA, OMEGA) == sum;
        witness_bound_ok &= sum.abs() <= op_norm(&s)? + norm_tol;
    }
    let pass = norms_ok
        && idempotent_exact
        && products_zero_exact
        && range_ok
        && witness_exact
        && witness_bound_ok;
    Ok(EFamilyReport {
        n_max: fam.n_max,
        norms,
        norms_ok,
        idempotent_exact,
        pairs_checked,
        products_zero_exact,
        range_ok,
        witness_trials: trials,
        witness_exact,
        witness_bound_ok,
        pass,
    })
}
