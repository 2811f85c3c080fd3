use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{op_norm, Backend, Matrix, Scalar};

use super::subsets::SubsetFamily;

/// `φ(a)` on an enumerated subset family: one block per `F`, on the indices
/// `(α, ω, F...)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedElement {
    pub coeffs: Vec<Scalar>,
    pub subsets: Vec<Vec<usize>>,
    pub blocks: Vec<Matrix>,
}

fn coeffs_backend(a: &[Scalar]) -> Backend {
    if a.iter().all(Scalar::is_exact) {
        Backend::Exact
    } else {
        Backend::Float
    }
}

/// `Σ_{j∈F} a_j E_j` restricted to `F ∪ {α, ω}`, in closed form: with
/// `S = Σ_{j∈F} a_j`, rows `α` and `ω` are `∓(S, S, a_F)` and row `j` is
/// `a_j (e_α + e_ω + e_j)*`.
pub fn phi_block(a: &[Scalar], subset: &[usize]) -> Matrix {
    let k = subset.len() + 2;
    let coeff = |j: usize| a.get(j - 1).cloned().unwrap_or_else(Scalar::zero_exact);
    let total: Scalar = subset.iter().map(|&j| coeff(j)).sum();
    Matrix::from_fn(k, k, coeffs_backend(a), |r, c| match r {
        0 | 1 => {
            let s = if c < 2 {
                total.clone()
            } else {
                coeff(subset[c - 2])
            };
            if r == 0 {
                -s
            } else {
                s
            }
        }
        _ if c < 2 || c == r => coeff(subset[r - 2]),
        _ => Scalar::zero_exact(),
    })
}

fn check_support(a: &[Scalar], n_max: usize) -> Result<()> {
    if let Some(j) = a.iter().rposition(|z| !z.is_zero()) {
        if j + 1 > n_max {
            return Err(Error::arg(format!(
                "coefficient {} outside 1..={n_max}",
                j + 1
            )));
        }
    }
    Ok(())
}

/// `φ(a)` for coefficients `a_1, a_2, ...` (index 0 holds `a_1`).
pub fn phi(a: &[Scalar], subsets: &SubsetFamily) -> Result<EmbeddedElement> {
    check_support(a, subsets.n_max())?;
    Ok(EmbeddedElement {
        coeffs: a.to_vec(),
        subsets: subsets.subsets().to_vec(),
        blocks: subsets.subsets().iter().map(|f| phi_block(a, f)).collect(),
    })
}

impl EmbeddedElement {
    /// Blockwise product.
    pub fn product(&self, other: &EmbeddedElement) -> Result<EmbeddedElement> {
        if self.subsets != other.subsets {
            return Err(Error::arg(
                "embedded elements live on different subset families",
            ));
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let at = |v: &[Scalar], i: usize| v.get(i).cloned().unwrap_or_else(Scalar::zero_exact);
        Ok(EmbeddedElement {
            coeffs: (0..n)
                .map(|i| at(&self.coeffs, i) * at(&other.coeffs, i))
                .collect(),
            subsets: self.subsets.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(x, y)| x.checked_mul(y))
                .collect::<Result<_>>()?,
        })
    }

    pub fn block_norms(&self) -> Result<Vec<f64>> {
        self.blocks.iter().map(op_norm).collect()
    }
}

/// `max_F ‖φ(a)_F‖` over the enumerated family.
pub fn phi_sup_norm(e: &EmbeddedElement) -> Result<f64> {
    if e.blocks.is_empty() {
        return Err(Error::dim("embedded element has no blocks"));
    }
    Ok(e.block_norms()?.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::family::{build_e, coord, RankOneFamily, ALPHA, OMEGA};
    use proptest::prelude::*;

    fn delta(j: usize, n: usize) -> Vec<Scalar> {
        (1..=n).map(|i| Scalar::int(i64::from(i == j))).collect()
    }

    #[test]
    fn blocks_are_restrictions_of_the_ambient_sum() {
        let fam = RankOneFamily::new(4).unwrap();
        let a = vec![
            Scalar::int(2),
            Scalar::ratio(-1, 3),
            Scalar::int(5),
            Scalar::ratio(7, 2),
        ];
        for f in [vec![1usize], vec![2, 4], vec![1, 3, 4]] {
            let mut s = Matrix::zeros(fam.dim(), fam.dim(), Backend::Exact);
            for &j in &f {
                s = &s + &build_e(j, &fam).unwrap().scale(&a[j - 1]);
            }
            let mut idx = vec![ALPHA, OMEGA];
            idx.extend(f.iter().map(|&j| coord(j)));
            assert_eq!(phi_block(&a, &f), s.restrict(&idx));
        }
        assert_eq!(
            phi_block(&delta(1, 4), &[2]),
            Matrix::zeros(3, 3, Backend::Exact)
        );
    }

    #[test]
    fn delta_one_on_two_point_subset() {
        let b = phi_block(&delta(1, 2), &[1, 2]);
        let expect = Matrix::from_int_rows(&[
            &[-1, -1, -1, 0],
            &[1, 1, 1, 0],
            &[1, 1, 1, 0],
            &[0, 0, 0, 0],
        ]);
        assert_eq!(b, expect);
    }

    #[test]
    fn orthogonal_deltas_multiply_to_zero() {
        let fam = SubsetFamily::canonical(3, 100, 3).unwrap();
        let p = phi(&delta(1, 3), &fam)
            .unwrap()
            .product(&phi(&delta(2, 3), &fam).unwrap())
            .unwrap();
        assert!(p.blocks.iter().all(Matrix::is_zero));
    }

    #[test]
    fn sup_norms() {
        let fam = SubsetFamily::canonical(4, 100, 4).unwrap();
        assert!((phi_sup_norm(&phi(&delta(1, 4), &fam).unwrap()).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(
            phi_sup_norm(&phi(&vec![Scalar::zero_exact(); 4], &fam).unwrap()).unwrap(),
            0.0
        );
        assert!(phi(&delta(5, 5), &fam).is_err());
        let empty = EmbeddedElement {
            coeffs: vec![],
            subsets: vec![],
            blocks: vec![],
        };
        assert!(phi_sup_norm(&empty).is_err());
    }

    proptest! {
        #[test]
        fn multiplicative_on_rationals(
            a in proptest::collection::vec((-6i64..=6, 1i64..=4), 5),
            b in proptest::collection::vec((-6i64..=6, 1i64..=4), 5),
        ) {
            let fam = SubsetFamily::canonical(5, 40, 5).unwrap();
            let a: Vec<Scalar> = a.iter().map(|&(p, q)| Scalar::ratio(p, q)).collect();
            let b: Vec<Scalar> = b.iter().map(|&(p, q)| Scalar::ratio(p, q)).collect();
            let lhs = phi(&a, &fam).unwrap().product(&phi(&b, &fam).unwrap()).unwrap();
            let ab: Vec<Scalar> = a.iter().cloned().zip(b.iter().cloned()).map(|(x, y)| x * y).collect();
            let rhs = phi(&ab, &fam).unwrap();
            prop_assert_eq!(lhs.blocks, rhs.blocks);
        }
    }
}
