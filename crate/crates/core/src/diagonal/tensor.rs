//! Finite sums `Σ u_i ⊗ v_i` of square matrices, i.e. elements of `A ⊗ A` for a
//! matrix algebra `A`, represented faithfully by their Kronecker flattening.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{op_norm, Backend, Matrix, Scalar, Tolerance};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TensorElem {
    dim: usize,
    terms: Vec<(Matrix, Matrix)>,
}

impl TensorElem {
    pub fn zero(dim: usize) -> Self {
        TensorElem {
            dim,
            terms: Vec::new(),
        }
    }

    pub fn simple(u: Matrix, v: Matrix) -> Result<Self> {
        let mut t = TensorElem::zero(u.rows());
        t.push(u, v)?;
        Ok(t)
    }

    pub fn from_terms(dim: usize, terms: Vec<(Matrix, Matrix)>) -> Result<Self> {
        let mut t = TensorElem::zero(dim);
        for (u, v) in terms {
            t.push(u, v)?;
        }
        Ok(t)
    }

    pub fn push(&mut self, u: Matrix, v: Matrix) -> Result<()> {
        for leg in [&u, &v] {
            if !leg.is_square() || leg.rows() != self.dim {
                return Err(Error::dim(format!(
                    "tensor legs must be {d}x{d}, got {}x{}",
                    leg.rows(),
                    leg.cols(),
                    d = self.dim
                )));
            }
        }
        self.terms.push((u, v));
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Matrix, Matrix)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_dim(&self, other: &TensorElem) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::dim(format!(
                "tensor dims {} and {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    /// Formal sum (concatenation of terms).
    pub fn plus(&self, other: &TensorElem) -> Result<TensorElem> {
        self.same_dim(other)?;
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    pub fn minus(&self, other: &TensorElem) -> Result<TensorElem> {
        self.plus(&other.scale(&Scalar::int(-1)))
    }

    /// Scales the first leg of every term.
    pub fn scale(&self, s: &Scalar) -> TensorElem {
        TensorElem {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(u, v)| (u.scale(s), v.clone()))
                .collect(),
        }
    }

    fn check_operand(&self, a: &Matrix) -> Result<()> {
        if !a.is_square() || a.rows() != self.dim {
            return Err(Error::dim(format!(
                "module action of a {}x{} matrix on a tensor of dim {}",
                a.rows(),
                a.cols(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Left module action `a · Σ u⊗v = Σ au ⊗ v`.
    pub fn left_mul(&self, a: &Matrix) -> Result<TensorElem> {
        self.check_operand(a)?;
        Ok(TensorElem {
            dim: self.dim,
            terms: self.terms.iter().map(|(u, v)| (a * u, v.clone())).collect(),
        })
    }

    /// Right module action `Σ u⊗v · a = Σ u ⊗ va`.
    pub fn right_mul(&self, a: &Matrix) -> Result<TensorElem> {
        self.check_operand(a)?;
        Ok(TensorElem {
            dim: self.dim,
            terms: self.terms.iter().map(|(u, v)| (u.clone(), v * a)).collect(),
        })
    }

    fn backend(&self) -> Backend {
        if self.terms.iter().all(|(u, v)| u.is_exact() && v.is_exact()) {
            Backend::Exact
        } else {
            Backend::Float
        }
    }

    /// Equality as elements of `A ⊗ A`, i.e. of the flattenings.
    pub fn agrees(&self, other: &TensorElem, tol: &Tolerance) -> Result<bool> {
        self.same_dim(other)?;
        flatten(self).agrees(&flatten(other), tol)
    }
}

/// `Σ kron(u_i, v_i)`, a `d² x d²` matrix; exact on exact input.
pub fn flatten(t: &TensorElem) -> Matrix {
    let d2 = t.dim * t.dim;
    let mut acc = Matrix::zeros(d2, d2, t.backend());
    for (u, v) in &t.terms {
        acc.add_kron(u, v).expect("legs share the tensor dimension");
    }
    acc
}

/// Linearized multiplication `Σ u_i v_i`.
pub fn pi_map(t: &TensorElem) -> Matrix {
    t.terms
        .iter()
        .fold(Matrix::zeros(t.dim, t.dim, t.backend()), |acc, (u, v)| {
            &acc + &(u * v)
        })
}

/// `a·t − t·a`, with the left action on first legs and the right action on second legs.
pub fn bimodule_commutator(a: &Matrix, t: &TensorElem) -> Result<TensorElem> {
    t.left_mul(a)?.minus(&t.right_mul(a)?)
}

/// Two-sided bounds on the projective tensor norm.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormBounds {
    /// Operator norm of the flattening; the spatial norm is dominated by the projective one.
    pub lower: f64,
    /// `Σ ‖u_i‖‖v_i‖` over the regrouped representation.
    pub upper: f64,
}

const PROPORTIONAL_RTOL: f64 = 1e-12;

/// `Some(c)` with `u = c·w` (exactly for exact input), `None` otherwise. `w` must be nonzero.
fn proportionality(u: &Matrix, w: &Matrix) -> Option<Scalar> {
    let (i, j, wp) = w.nonzeros().next()?;
    let c = u.get(i, j) / wp;
    let scaled = w.scale(&c);
    if u.is_exact() && w.is_exact() {
        (scaled == *u).then_some(c)
    } else {
        let scale = u.max_abs().max(1.0);
        (scaled.max_abs_diff(u).ok()? <= PROPORTIONAL_RTOL * scale).then_some(c)
    }
}

fn merge_pass(terms: Vec<(Matrix, Matrix)>, by_left: bool) -> Vec<(Matrix, Matrix)> {
    let mut groups: Vec<(Matrix, Matrix)> = Vec::new();
    for (u, v) in terms {
        let (key, other) = if by_left { (u, v) } else { (v, u) };
        let hit = groups
            .iter_mut()
            .find_map(|g| proportionality(&key, &g.0).map(|c| (g, c)));
        match hit {
            Some((g, c)) => g.1 = &g.1 + &other.scale(&c),
            None => groups.push((key, other)),
        }
    }
    groups
        .into_iter()
        .map(|(k, o)| if by_left { (k, o) } else { (o, k) })
        .collect()
}

/// Drops terms with a zero leg, then merges terms with proportional left legs,
/// then terms with proportional right legs (one pass each). The result has the
/// same flattening and a term-norm sum no larger than the input's.
pub fn regroup(t: &TensorElem) -> TensorElem {
    let nonzero = |terms: Vec<(Matrix, Matrix)>| -> Vec<(Matrix, Matrix)> {
        terms
            .into_iter()
            .filter(|(u, v)| !u.is_zero() && !v.is_zero())
            .collect()
    };
    let terms = nonzero(t.terms.clone());
    let terms = nonzero(merge_pass(terms, true));
    let terms = nonzero(merge_pass(terms, false));
    TensorElem { dim: t.dim, terms }
}

/// Certified lower and upper bounds on the projective norm of `t`.
///
/// A tensor whose flattening vanishes is zero (the flattening is injective),
/// so both bounds are zero in that case.
pub fn tensor_norm_bounds(t: &TensorElem) -> Result<NormBounds> {
    tensor_norm_bounds_with(t, &flatten(t))
}

/// [`tensor_norm_bounds`] with a precomputed flattening.
pub(crate) fn tensor_norm_bounds_with(t: &TensorElem, flat: &Matrix) -> Result<NormBounds> {
    if flat.is_zero() || t.dim == 0 {
        return Ok(NormBounds {
            lower: 0.0,
            upper: 0.0,
        });
    }
    Ok(NormBounds {
        lower: op_norm(flat)?,
        upper: representation_upper(t)?,
    })
}

/// `Σ ‖u_i‖‖v_i‖` over the regrouped representation.
pub(crate) fn representation_upper(t: &TensorElem) -> Result<f64> {
    regroup(t)
        .terms
        .iter()
        .map(|(u, v)| Ok(op_norm(u)? * op_norm(v)?))
        .sum()
}
