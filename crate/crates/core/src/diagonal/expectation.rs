//! The map `E(x) = Σ u_i x v_i` attached to an exact diagonal `Σ u_i ⊗ v_i` of a
//! finite-dimensional algebra. It lands in the commutant, fixes the commutant,
//! and is a commutant bimodule map; applied to the range projection of a
//! commuting idempotent it returns the idempotent itself.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{op_norm, Backend, Matrix, Scalar, Tolerance};

use super::tensor::{bimodule_commutator, flatten, pi_map, TensorElem};

/// A diagonal for `span(algebra_basis)`: `π(Δ)` is a unit for the basis and
/// `a·Δ = Δ·a` for every basis element.
#[derive(Clone, Debug)]
pub struct FiniteDiagonal {
    diag: TensorElem,
    algebra_basis: Vec<Matrix>,
}

fn tol_for(exact: bool, tol: &Tolerance) -> Tolerance {
    match (exact, tol.is_exact()) {
        (true, _) => Tolerance::exact(),
        (false, true) => Tolerance::default(),
        (false, false) => *tol,
    }
}

impl FiniteDiagonal {
    pub fn new(diag: TensorElem, algebra_basis: Vec<Matrix>, tol: &Tolerance) -> Result<Self> {
        let u = pi_map(&diag);
        let exact = u.is_exact() && algebra_basis.iter().all(Matrix::is_exact);
        let cmp = tol_for(exact, tol);
        for (i, a) in algebra_basis.iter().enumerate() {
            if a.rows() != diag.dim() || !a.is_square() {
                return Err(Error::dim(format!(
                    "basis element {} has the wrong size",
                    i + 1
                )));
            }
            if !(&u * a).agrees(a, &cmp)? || !(a * &u).agrees(a, &cmp)? {
                return Err(Error::pre(format!(
                    "π(Δ) does not act as a unit on basis element {}",
                    i + 1
                )));
            }
            let comm = flatten(&bimodule_commutator(a, &diag)?);
            if comm.max_abs() > cmp.abs_tol() {
                return Err(Error::pre(format!(
                    "basis element {} does not commute with Δ",
                    i + 1
                )));
            }
        }
        Ok(FiniteDiagonal {
            diag,
            algebra_basis,
        })
    }

    pub fn diag(&self) -> &TensorElem {
        &self.diag
    }

    pub fn algebra_basis(&self) -> &[Matrix] {
        &self.algebra_basis
    }
}

/// `E(x) = Σ u_i x v_i`.
pub fn expectation_from_diagonal(d: &FiniteDiagonal, x: &Matrix) -> Result<Matrix> {
    if !x.is_square() || x.rows() != d.diag.dim() {
        return Err(Error::dim(format!(
            "expectation of a {}x{} matrix through a diagonal of dim {}",
            x.rows(),
            x.cols(),
            d.diag.dim()
        )));
    }
    let zero = Matrix::zeros(x.rows(), x.cols(), x.backend());
    Ok(d.diag
        .terms()
        .iter()
        .fold(zero, |acc, (u, v)| &acc + &(&(u * x) * v)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectationReport {
    /// `E(x)` commutes with every basis element, for every sampled `x`.
    pub into_commutant: bool,
    /// `E(u) = u` for every commutant sample.
    pub fixes_commutant: bool,
    /// `E(uxv) = u E(x) v` for all commutant pairs and sampled `x`.
    pub commutant_bimodule: bool,
    pub pass: bool,
}

pub fn certify_expectation(
    d: &FiniteDiagonal,
    xs: &[Matrix],
    commutant: &[Matrix],
    tol: &Tolerance,
) -> Result<ExpectationReport> {
    let exact = xs.iter().chain(commutant).all(Matrix::is_exact)
        && d.diag.terms().iter().all(|(u, _)| u.is_exact());
    let cmp = tol_for(exact, tol);
    let mut into_commutant = true;
    for x in xs {
        let ex = expectation_from_diagonal(d, x)?;
        for a in &d.algebra_basis {
            into_commutant &= (&ex * a).agrees(&(a * &ex), &cmp)?;
        }
    }
    let mut fixes_commutant = true;
    for u in commutant {
        fixes_commutant &= expectation_from_diagonal(d, u)?.agrees(u, &cmp)?;
    }
    let mut commutant_bimodule = true;
    for x in xs {
        let ex = expectation_from_diagonal(d, x)?;
        for u in commutant {
            for v in commutant {
                let lhs = expectation_from_diagonal(d, &(&(u * x) * v))?;
                commutant_bimodule &= lhs.agrees(&(&(u * &ex) * v), &cmp)?;
            }
        }
    }
    Ok(ExpectationReport {
        into_commutant,
        fixes_commutant,
        commutant_bimodule,
        pass: into_commutant && fixes_commutant && commutant_bimodule,
    })
}

/// The two-dimensional skew idempotent example, `e = [[1, t], [0, 0]]`, with
/// its range projection `p = diag(1, 0)` and the diagonal
/// `Δ = e⊗e + (1−e)⊗(1−e)` of `span{1, e}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SkewDemo {
    pub t: String,
    pub e: Matrix,
    pub p: Matrix,
    pub e_of_p: Matrix,
    /// Each link of `E(p) = E(ep) = eE(p) = E(p)e = E(pe) = E(e) = e`, checked exactly.
    pub chain_links: Vec<bool>,
    pub norm_e: f64,
    pub norm_e_of_p: f64,
    pub expectation: ExpectationReport,
    pub pass: bool,
}

pub fn skew_idempotent_demo(t: &BigRational) -> Result<SkewDemo> {
    let ts = Scalar::from(t.clone());
    let mut e = Matrix::from_int_rows(&[&[1, 0], &[0, 0]]);
    e.set(0, 1, ts);
    let one = Matrix::identity(2, Backend::Exact);
    let p = Matrix::diag_int(&[1, 0]);
    let gap = &one - &e;
    let diag = TensorElem::from_terms(2, vec![(e.clone(), e.clone()), (gap.clone(), gap)])?;
    let fd = FiniteDiagonal::new(diag, vec![one.clone(), e.clone()], &Tolerance::exact())?;
    let ex = |x: &Matrix| expectation_from_diagonal(&fd, x);

    let e_of_p = ex(&p)?;
    let steps = [
        ex(&(&e * &p))?,
        &e * &e_of_p,
        &e_of_p * &e,
        ex(&(&p * &e))?,
        ex(&e)?,
        e.clone(),
    ];
    let mut chain_links = Vec::with_capacity(steps.len());
    let mut prev = &e_of_p;
    for s in &steps {
        chain_links.push(prev == s);
        prev = s;
    }
    // Commutant of span{1, e} is span{1, e} itself for t ≠ 0.
    let commutant = vec![one.clone(), e.clone(), &one - &e];
    let xs = vec![
        p.clone(),
        Matrix::from_int_rows(&[&[0, 1], &[1, 0]]),
        Matrix::from_int_rows(&[&[2, -1], &[3, 5]]),
    ];
    let expectation = certify_expectation(&fd, &xs, &commutant, &Tolerance::exact())?;
    let norm_e = op_norm(&e)?;
    let norm_e_of_p = op_norm(&e_of_p)?;
    let pass = chain_links.iter().all(|&b| b) && e_of_p == e && expectation.pass;
    Ok(SkewDemo {
        t: crate::matrix::format_rational(t),
        e,
        p,
        e_of_p,
        chain_links,
        norm_e,
        norm_e_of_p,
        expectation,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rat;

    fn unit(i: usize, j: usize) -> Matrix {
        Matrix::from_fn(2, 2, Backend::Exact, |a, b| {
            Scalar::int((a == i && b == j) as i64)
        })
    }

    fn m2_diagonal() -> FiniteDiagonal {
        let diag =
            TensorElem::from_terms(2, vec![(unit(0, 0), unit(0, 0)), (unit(1, 0), unit(0, 1))])
                .unwrap();
        let basis = vec![unit(0, 0), unit(0, 1), unit(1, 0), unit(1, 1)];
        FiniteDiagonal::new(diag, basis, &Tolerance::exact()).unwrap()
    }

    #[test]
    fn full_matrix_algebra_expectation_is_scalar() {
        let d = m2_diagonal();
        let x = Matrix::from_int_rows(&[&[7, 2], &[-1, 4]]);
        let ex = expectation_from_diagonal(&d, &x).unwrap();
        assert_eq!(
            ex,
            Matrix::identity(2, Backend::Exact).scale(&Scalar::int(7))
        );
        let id = Matrix::identity(2, Backend::Exact);
        let rep = certify_expectation(
            &d,
            &[x],
            &[id.clone(), id.scale(&Scalar::ratio(3, 2))],
            &Tolerance::exact(),
        )
        .unwrap();
        assert!(rep.pass);
        assert_eq!(expectation_from_diagonal(&d, &id).unwrap(), id);
    }

    #[test]
    fn skew_example_reproduces_e() {
        for t in [1, 10, 100] {
            let demo = skew_idempotent_demo(&rat(t, 1)).unwrap();
            assert!(demo.pass, "t = {t}");
            assert_eq!(demo.e_of_p, demo.e);
            let expected = (1.0 + (t * t) as f64).sqrt();
            assert!((demo.norm_e - expected).abs() < 1e-8);
            assert_eq!(demo.norm_e, demo.norm_e_of_p);
        }
    }

    #[test]
    fn rejects_non_diagonals() {
        let diag = TensorElem::simple(unit(0, 0), unit(0, 0)).unwrap();
        let err = FiniteDiagonal::new(diag, vec![unit(0, 1)], &Tolerance::exact()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let d = m2_diagonal();
        assert!(expectation_from_diagonal(&d, &Matrix::identity(3, Backend::Exact)).is_err());
    }
}
